#ifndef POLARFUSE_EIGENSPACE_HPP
#define POLARFUSE_EIGENSPACE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "polarfuse/binary_io.hpp"
#include "polarfuse/error.hpp"
#include "polarfuse/image.hpp"
#include "polarfuse/jacobi.hpp"

namespace polarfuse {

using FeatureVector = std::vector<double>;

/// How many eigenfaces to keep: a fixed count, or the smallest count whose
/// eigenvalues explain at least `tau` of the total variance.
struct ComponentPolicy {
    enum class Kind { Fixed, Variance };
    Kind kind = Kind::Variance;
    std::size_t k = 0;
    double tau = 0.95;

    static ComponentPolicy fixed(std::size_t k) { return {Kind::Fixed, k, 0.0}; }
    static ComponentPolicy variance(double tau) { return {Kind::Variance, 0, tau}; }

    void validate() const {
        if (kind == Kind::Fixed && k == 0) {
            throw Error(ErrorCode::InvalidArgument, "fixed component count must be >= 1");
        }
        if (kind == Kind::Variance && !(tau > 0.0 && tau <= 1.0)) {
            throw Error(ErrorCode::InvalidArgument, "variance fraction must be in (0,1]");
        }
    }
};

/// Mean face plus an orthonormal eigenface basis (row i of `basis` is
/// eigenface i, length dim). Eigenvalues use the 1/N covariance convention.
struct EigenspaceModel {
    std::size_t dim = 0;
    std::vector<double> mean;
    std::vector<double> eigenvalues;
    std::vector<double> basis;

    std::size_t k() const noexcept { return eigenvalues.size(); }

    std::span<const double> component(std::size_t i) const {
        return std::span<const double>(basis).subspan(i * dim, dim);
    }

    friend bool operator==(const EigenspaceModel&, const EigenspaceModel&) = default;
};

namespace detail {

inline double dot(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

}  // namespace detail

/// Fits the eigenspace by the snapshot method: eigendecompose the N x N
/// Gram matrix of the centred images, then lift each eigenvector back to
/// pixel space. Identical inputs give a k = 0 model.
inline EigenspaceModel fit_eigenspace(std::span<const GrayImage> images,
                                      const ComponentPolicy& policy = {}) {
    policy.validate();
    const std::size_t n = images.size();
    if (n < 2) {
        throw Error(ErrorCode::TooFewImages, "eigenspace fit needs at least 2 images");
    }
    for (const auto& img : images) {
        if (!img.same_shape(images.front())) {
            throw Error(ErrorCode::DimensionMismatch, "eigenspace training images differ in size");
        }
    }

    EigenspaceModel model;
    const std::size_t d = images.front().size();
    model.dim = d;
    model.mean.assign(d, 0.0);
    for (const auto& img : images) {
        const auto px = img.pixels();
        for (std::size_t j = 0; j < d; ++j) model.mean[j] += px[j];
    }
    for (double& m : model.mean) m /= static_cast<double>(n);

    std::vector<double> centred(n * d);
    for (std::size_t i = 0; i < n; ++i) {
        const auto px = images[i].pixels();
        for (std::size_t j = 0; j < d; ++j) centred[i * d + j] = px[j] - model.mean[j];
    }
    auto row = [&](std::size_t i) { return std::span<const double>(centred).subspan(i * d, d); };

    std::vector<double> gram(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double g = detail::dot(row(i), row(j)) / static_cast<double>(n);
            gram[i * n + j] = g;
            gram[j * n + i] = g;
        }
    }
    double trace = 0.0;
    for (std::size_t i = 0; i < n; ++i) trace += gram[i * n + i];

    const SymmetricEigen eig = jacobi_eigen(std::move(gram), n);

    // Centred data has rank <= n-1; eigenvalues at rounding level are dropped.
    const double rank_floor = 1e-12 * std::max(trace, 0.0);
    std::size_t available = 0;
    while (available < n - 1 && eig.values[available] > rank_floor && eig.values[available] > 0.0) {
        ++available;
    }

    std::size_t keep = available;
    if (policy.kind == ComponentPolicy::Kind::Fixed) {
        keep = std::min(policy.k, available);
    } else if (available > 0) {
        double total = 0.0;
        for (std::size_t i = 0; i < available; ++i) total += eig.values[i];
        double cum = 0.0;
        keep = 0;
        while (keep < available) {
            cum += eig.values[keep++];
            if (cum / total >= policy.tau - 1e-12) break;
        }
    }

    model.eigenvalues.reserve(keep);
    model.basis.assign(keep * d, 0.0);
    for (std::size_t c = 0; c < keep; ++c) {
        model.eigenvalues.push_back(std::max(eig.values[c], 0.0));
        std::span<double> u = std::span<double>(model.basis).subspan(c * d, d);
        for (std::size_t i = 0; i < n; ++i) {
            const double coeff = eig.vectors[c * n + i];
            const auto r = row(i);
            for (std::size_t j = 0; j < d; ++j) u[j] += coeff * r[j];
        }
        const double norm = std::sqrt(detail::dot(u, u));
        std::size_t argmax = 0;
        for (std::size_t j = 1; j < d; ++j) {
            if (std::abs(u[j]) > std::abs(u[argmax])) argmax = j;
        }
        const double scale = (u[argmax] < 0.0 ? -1.0 : 1.0) / norm;
        for (double& x : u) x *= scale;
    }
    return model;
}

inline FeatureVector project(const EigenspaceModel& model, std::span<const double> x) {
    if (x.size() != model.dim) {
        throw Error(ErrorCode::DimensionMismatch, "projection input has length " +
                                                      std::to_string(x.size()) + ", model expects " +
                                                      std::to_string(model.dim));
    }
    std::vector<double> centred(model.dim);
    for (std::size_t j = 0; j < model.dim; ++j) centred[j] = x[j] - model.mean[j];
    FeatureVector f(model.k());
    for (std::size_t c = 0; c < model.k(); ++c) f[c] = detail::dot(model.component(c), centred);
    return f;
}

inline FeatureVector project(const EigenspaceModel& model, const GrayImage& img) {
    return project(model, img.pixels());
}

inline std::vector<double> reconstruct(const EigenspaceModel& model, std::span<const double> f) {
    if (f.size() != model.k()) {
        throw Error(ErrorCode::LengthMismatch, "feature vector has length " +
                                                   std::to_string(f.size()) + ", model has k = " +
                                                   std::to_string(model.k()));
    }
    std::vector<double> x = model.mean;
    for (std::size_t c = 0; c < model.k(); ++c) {
        const auto u = model.component(c);
        for (std::size_t j = 0; j < model.dim; ++j) x[j] += f[c] * u[j];
    }
    return x;
}

// Container: "PFEIG1", D and k as u64, then mean[D], eigenvalues[k] and
// basis[k*D] as little-endian f64.

inline std::string encode_eigenspace(const EigenspaceModel& m) {
    std::string out = "PFEIG1";
    binio::put_u64(out, m.dim);
    binio::put_u64(out, m.k());
    for (double x : m.mean) binio::put_f64(out, x);
    for (double x : m.eigenvalues) binio::put_f64(out, x);
    for (double x : m.basis) binio::put_f64(out, x);
    return out;
}

inline EigenspaceModel decode_eigenspace(binio::Reader& in) {
    in.expect_magic("PFEIG1");
    EigenspaceModel m;
    m.dim = static_cast<std::size_t>(in.u64());
    const auto k = static_cast<std::size_t>(in.u64());
    if (m.dim == 0 || in.remaining() / 8 < m.dim * (k + 1) + k) {
        throw Error(ErrorCode::BadModelFile, "eigenspace container truncated");
    }
    m.mean.resize(m.dim);
    for (double& x : m.mean) x = in.f64();
    m.eigenvalues.resize(k);
    for (double& x : m.eigenvalues) x = in.f64();
    m.basis.resize(k * m.dim);
    for (double& x : m.basis) x = in.f64();
    return m;
}

inline EigenspaceModel decode_eigenspace(std::string_view bytes) {
    binio::Reader in(bytes);
    EigenspaceModel m = decode_eigenspace(in);
    if (!in.done()) throw Error(ErrorCode::BadModelFile, "trailing bytes after eigenspace");
    return m;
}

}  // namespace polarfuse

#endif
