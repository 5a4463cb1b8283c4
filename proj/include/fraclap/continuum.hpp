#pragma once

#include "fraclap/torus.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <filesystem>
#include <utility>
#include <vector>

namespace fraclap {

/// Regular periodic grid on [0,1)^d: node (p, q) sits at (p h, q h), h = 1/m.
/// Only d = 1 and d = 2 are supported.
struct PeriodicGrid {
    std::size_t m = 100;
    std::size_t d = 2;

    [[nodiscard]] double spacing() const noexcept { return 1.0 / static_cast<double>(m); }
    [[nodiscard]] std::size_t nodes() const noexcept { return d == 1 ? m : m * m; }
};

/// Values on a PeriodicGrid, row-major: entry p * m + q is node (p, q).
struct GridFunction {
    PeriodicGrid grid;
    std::vector<double> values;

    [[nodiscard]] double at(std::size_t p, std::size_t q = 0) const {
        return values[grid.d == 1 ? p : p * grid.m + q];
    }
};

enum class SpectrumVariant { FiniteDifference, Analytic };

/// Eigenvalues of the periodic Laplacian (uniform density) on the Fourier
/// modes of a grid, indexed like GridFunction by frequency (p, q) in [0, m).
///
/// FiniteDifference: (4/h^2) (sin^2(pi p/m) + sin^2(pi q/m)), the 5-point stencil.
/// Analytic: 4 pi^2 (k1^2 + k2^2) with k the signed frequency of p.
struct ContinuumSpectrum {
    PeriodicGrid grid;
    SpectrumVariant variant = SpectrumVariant::FiniteDifference;
    std::vector<double> eigenvalues;

    /// All eigenvalues in ascending order (lambda_1 = 0 first).
    [[nodiscard]] std::vector<double> sorted() const;
};

ContinuumSpectrum continuum_spectrum(const PeriodicGrid& grid, SpectrumVariant variant);

/// g(z) = sum over nonzero modes of lambda^-s cos(2 pi freq . z).
GridFunction fractional_green(const ContinuumSpectrum& spec, double s);

/// Grid node nearest to a point, ties toward the lower index, wrapped mod m.
std::size_t snap_to_grid(const PeriodicGrid& grid, const TorusPoint& x);

struct ContinuumSolution {
    GridFunction u;
    std::vector<std::size_t> nodes;  // snapped constraint nodes
    double energy = 0.0;             // E^(s) of u on the grid
};

/// Constrained minimizer of the grid energy sum_modes lambda^s |u_hat|^2,
/// via the translation-invariant Green matrix G_ij = g(z_i - z_j).
ContinuumSolution solve_continuum_constrained(const ContinuumSpectrum& spec,
                                              const std::vector<std::pair<TorusPoint, double>>& constraints,
                                              double s);

/// sum over modes of lambda^s |<u, e_k>|^2 with the grid-normalized inner
/// product, computed from a discrete Fourier transform of u.
double continuum_energy(const ContinuumSpectrum& spec, const GridFunction& u, double s);

enum class Interpolation { Bilinear, Bicubic };

/// Periodic interpolation of a grid function at arbitrary torus points.
/// Bicubic is the tensor-product Catmull-Rom spline.
std::vector<double> interpolate(const GridFunction& fn, const SampleSet& queries,
                                Interpolation scheme = Interpolation::Bicubic);

/// sqrt((1/n) sum_i (a_i - b_i)^2).
double l2_mu_n_error(const Eigen::Ref<const Eigen::VectorXd>& u_n,
                     const Eigen::Ref<const Eigen::VectorXd>& u_at_nodes);

/// m rows of m comma-separated values (one column when d = 1).
void write_grid_csv(const GridFunction& fn, const std::filesystem::path& path);

}  // namespace fraclap
