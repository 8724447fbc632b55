#ifndef POLARFUSE_JACOBI_HPP
#define POLARFUSE_JACOBI_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "polarfuse/error.hpp"

namespace polarfuse {

/// Eigenpairs of a symmetric matrix, sorted by non-increasing eigenvalue.
/// `vectors` is row-major n x n with eigenvector i stored in row i.
struct SymmetricEigen {
    std::size_t n = 0;
    std::vector<double> values;
    std::vector<double> vectors;
    std::size_t sweeps = 0;
};

/// Cyclic Jacobi rotations on a dense symmetric n x n matrix (row-major).
/// Iterates until the off-diagonal Frobenius norm drops below
/// tol * max(1, ||A||_F).
inline SymmetricEigen jacobi_eigen(std::vector<double> a, std::size_t n, double tol = 1e-12,
                                   std::size_t max_sweeps = 100) {
    if (a.size() != n * n) {
        throw Error(ErrorCode::LengthMismatch, "jacobi_eigen: matrix is not n x n");
    }
    auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };

    // v holds eigenvectors as columns during the iteration.
    std::vector<double> v(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

    double frob = 0.0;
    for (double x : a) frob += x * x;
    const double threshold = tol * std::max(1.0, std::sqrt(frob));

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * at(i, j) * at(i, j);
        return std::sqrt(s);
    };

    SymmetricEigen out;
    out.n = n;
    while (out.sweeps < max_sweeps && off_norm() >= threshold) {
        ++out.sweeps;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = at(p, q);
                if (apq == 0.0) continue;
                const double app = at(p, p);
                const double aqq = at(q, q);
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = at(k, p);
                    const double akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = at(p, k);
                    const double aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
                at(p, q) = 0.0;
                at(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v[k * n + p];
                    const double vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return at(x, x) > at(y, y); });

    out.values.resize(n);
    out.vectors.resize(n * n);
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t src = order[r];
        out.values[r] = at(src, src);
        for (std::size_t k = 0; k < n; ++k) out.vectors[r * n + k] = v[k * n + src];
    }
    return out;
}

}  // namespace polarfuse

#endif
