#pragma once

#include <Eigen/Core>

#include <cstddef>

namespace fraclap {

/// Eigenpairs of a graph Laplacian in the L2(mu_n) inner product
/// <u, v> = (1/n) sum_i u_i v_i.
///
/// Eigenvalues ascend. Column k of `eigenvectors` is psi_{k+1}, scaled so
/// that (1/n) |psi|^2 = 1, with its first entry of magnitude > 1e-12 positive.
/// When the lowest eigenvalue is simple and its eigenvector is numerically
/// constant, it is stored as exactly 0 with psi_1 = 1.
struct SpectralDecomposition {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;

    [[nodiscard]] std::size_t size() const noexcept {
        return static_cast<std::size_t>(eigenvalues.size());
    }
};

/// lambda^s with lambda <= 1e-12 mapped to 0 (s > 0) and lambda^0 = 1.
double spectral_power(double lambda, double s);

SpectralDecomposition eigendecompose(const Eigen::MatrixXd& laplacian);

double inner_product(const Eigen::Ref<const Eigen::VectorXd>& u,
                     const Eigen::Ref<const Eigen::VectorXd>& v);

/// Coefficients <u, psi_k> for every k.
Eigen::VectorXd spectral_coefficients(const SpectralDecomposition& spec,
                                      const Eigen::Ref<const Eigen::VectorXd>& u);

/// sum_k lambda_k^s <u, psi_k>^2, for s > 0.
double fractional_energy(const SpectralDecomposition& spec,
                         const Eigen::Ref<const Eigen::VectorXd>& u, double s);

/// sum_k lambda_k^s <u, psi_k> psi_k, for s >= 0.
Eigen::VectorXd apply_fractional(const SpectralDecomposition& spec,
                                 const Eigen::Ref<const Eigen::VectorXd>& u, double s);

}  // namespace fraclap
