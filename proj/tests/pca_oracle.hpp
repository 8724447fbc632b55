#ifndef POLARFUSE_PCA_ORACLE_HPP
#define POLARFUSE_PCA_ORACLE_HPP

#include <Eigen/Dense>

#include <vector>

#include "polarfuse/image.hpp"

namespace polarfuse::testing {

/// Brute-force PCA: eigendecomposition of the full D x D covariance
/// (1/N normalisation), eigenpairs sorted by decreasing eigenvalue.
struct CovarianceOracle {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;  // column i pairs with eigenvalue i
    double trace = 0.0;
};

inline CovarianceOracle covariance_oracle(const std::vector<GrayImage>& images) {
    const auto n = static_cast<Eigen::Index>(images.size());
    const auto d = static_cast<Eigen::Index>(images.front().size());
    Eigen::MatrixXd x(d, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < d; ++j) x(j, i) = images[static_cast<std::size_t>(i)].pixels()[static_cast<std::size_t>(j)];
    const Eigen::VectorXd mean = x.rowwise().mean();
    const Eigen::MatrixXd a = x.colwise() - mean;
    const Eigen::MatrixXd cov = a * a.transpose() / static_cast<double>(n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    CovarianceOracle o;
    o.eigenvalues = es.eigenvalues().reverse();
    o.eigenvectors = es.eigenvectors().rowwise().reverse();
    o.trace = cov.trace();
    return o;
}

}  // namespace polarfuse::testing

#endif
