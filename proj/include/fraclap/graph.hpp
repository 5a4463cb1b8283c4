#pragma once

#include "fraclap/torus.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <functional>

namespace fraclap {

enum class KernelKind : std::uint8_t { Indicator = 0, Custom = 1 };

/// Radial weight profile eta: [0, inf) -> [0, inf), nonincreasing, zero past t = 1.
///
/// The indicator profile is 1 on [0,1] (boundary included) and is not
/// normalized to unit mass; `normalized()` only records what the caller
/// asserted about a custom profile.
class Kernel {
public:
    static Kernel indicator();

    /// Validates the profile on a fine grid of [0,1]: finite, nonnegative and
    /// nonincreasing. Values for t > 1 are never queried.
    static Kernel custom(std::function<double(double)> profile, bool normalized = false);

    [[nodiscard]] double operator()(double t) const {
        if (t > 1.0) {
            return 0.0;
        }
        return kind_ == KernelKind::Indicator ? 1.0 : profile_(t);
    }

    [[nodiscard]] KernelKind kind() const noexcept { return kind_; }
    [[nodiscard]] bool normalized() const noexcept { return normalized_; }

    /// sup{t : eta(t) > 0}, located by bisection to absolute tolerance `tol`.
    [[nodiscard]] double support_radius(double tol = 1e-12) const;

private:
    Kernel(KernelKind kind, std::function<double(double)> profile, bool normalized)
        : kind_(kind), profile_(std::move(profile)), normalized_(normalized) {}

    KernelKind kind_;
    std::function<double(double)> profile_;
    bool normalized_;
};

/// (1/d) * integral over R^d of eta(|h|) |h|^2 dh.
double sigma_eta(const Kernel& kernel, std::size_t d);

struct WeightedGraph {
    std::size_t n = 0;
    std::size_t dim = 0;
    double eps = 0.0;
    Eigen::MatrixXd weights;  // symmetric, self-weights included
    Eigen::VectorXd degrees;  // full row sums of `weights`
    double sigma_eta = 0.0;
    KernelKind kernel_kind = KernelKind::Indicator;
};

/// w_ij = eps^-d * eta(torus_distance(x_i, x_j) / eps) for all i, j.
WeightedGraph build_weight_matrix(const SampleSet& points, double eps, const Kernel& kernel);

/// Rescaled Laplacian 2 / (sigma_eta n eps^2) * (D - W).
Eigen::MatrixXd graph_laplacian(const WeightedGraph& g);

/// One connected component over edges {i != j : w_ij > 0}.
bool is_connected(const WeightedGraph& g);

/// Smallest eps at which the eps-graph is connected: the bottleneck edge of
/// the torus minimum spanning tree divided by the kernel's support radius.
double connectivity_radius(const SampleSet& points, const Kernel& kernel, double tol = 1e-12);

}  // namespace fraclap
