#include "fraclap/spectral.hpp"

#include "fraclap/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace fraclap {

namespace {

constexpr double kZeroEigenvalue = 1e-12;

void require_length(const SpectralDecomposition& spec, Eigen::Index len, const char* op) {
    if (len != spec.eigenvalues.size()) {
        throw InvalidArgument(std::string(op) + ": node function has length " + std::to_string(len) +
                              ", expected " + std::to_string(spec.eigenvalues.size()));
    }
}

}  // namespace

double spectral_power(double lambda, double s) {
    if (s == 0.0) {
        return 1.0;
    }
    if (lambda <= kZeroEigenvalue) {
        return 0.0;
    }
    return std::pow(lambda, s);
}

SpectralDecomposition eigendecompose(const Eigen::MatrixXd& laplacian) {
    const Eigen::Index n = laplacian.rows();
    if (n == 0 || laplacian.cols() != n) {
        throw InvalidArgument("eigendecompose: matrix must be square and nonempty");
    }
    const double scale = laplacian.cwiseAbs().maxCoeff();
    if (!std::isfinite(scale)) {
        throw InvalidArgument("eigendecompose: non-finite entries");
    }
    const double asym = (laplacian - laplacian.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-10 * std::max(scale, 1e-300)) {
        throw InvalidArgument("eigendecompose: matrix is not symmetric");
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigendecompose: eigensolver did not converge");
    }

    SpectralDecomposition spec;
    spec.eigenvalues = solver.eigenvalues();
    spec.eigenvectors = solver.eigenvectors() * std::sqrt(static_cast<double>(n));

    for (Eigen::Index k = 0; k < n; ++k) {
        auto col = spec.eigenvectors.col(k);
        for (Eigen::Index i = 0; i < n; ++i) {
            if (std::abs(col(i)) > 1e-12) {
                if (col(i) < 0.0) {
                    col = -col;
                }
                break;
            }
        }
    }

    const double top = std::max(std::abs(spec.eigenvalues(n - 1)), std::abs(spec.eigenvalues(0)));
    const bool simple_zero = std::abs(spec.eigenvalues(0)) <= 1e-8 * std::max(top, 1.0) &&
                             (n == 1 || spec.eigenvalues(1) > 1e-8 * top);
    if (simple_zero &&
        (spec.eigenvectors.col(0).array() - 1.0).abs().maxCoeff() < 1e-6) {
        spec.eigenvalues(0) = 0.0;
        spec.eigenvectors.col(0).setOnes();
    }
    return spec;
}

double inner_product(const Eigen::Ref<const Eigen::VectorXd>& u,
                     const Eigen::Ref<const Eigen::VectorXd>& v) {
    if (u.size() != v.size()) {
        throw InvalidArgument("inner_product: length mismatch");
    }
    if (u.size() == 0) {
        throw InvalidArgument("inner_product: empty node functions");
    }
    return u.dot(v) / static_cast<double>(u.size());
}

Eigen::VectorXd spectral_coefficients(const SpectralDecomposition& spec,
                                      const Eigen::Ref<const Eigen::VectorXd>& u) {
    require_length(spec, u.size(), "spectral_coefficients");
    return spec.eigenvectors.transpose() * u / static_cast<double>(u.size());
}

double fractional_energy(const SpectralDecomposition& spec,
                         const Eigen::Ref<const Eigen::VectorXd>& u, double s) {
    if (!(s > 0.0)) {
        throw InvalidArgument("fractional_energy: s must be positive");
    }
    const Eigen::VectorXd coeff = spectral_coefficients(spec, u);
    double energy = 0.0;
    for (Eigen::Index k = 0; k < coeff.size(); ++k) {
        energy += spectral_power(spec.eigenvalues(k), s) * coeff(k) * coeff(k);
    }
    return energy;
}

Eigen::VectorXd apply_fractional(const SpectralDecomposition& spec,
                                 const Eigen::Ref<const Eigen::VectorXd>& u, double s) {
    if (!(s >= 0.0)) {
        throw InvalidArgument("apply_fractional: s must be nonnegative");
    }
    Eigen::VectorXd coeff = spectral_coefficients(spec, u);
    for (Eigen::Index k = 0; k < coeff.size(); ++k) {
        coeff(k) *= spectral_power(spec.eigenvalues(k), s);
    }
    return spec.eigenvectors * coeff;
}

}  // namespace fraclap
