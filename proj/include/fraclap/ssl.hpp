#pragma once

#include "fraclap/spectral.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <vector>

namespace fraclap {

struct Constraint {
    std::size_t node;  // 0-based node index
    double label;
};

/// Pointwise label constraints u(x_i) = l_i. Node indices must be distinct;
/// conflicting duplicates are rejected rather than averaged.
class ConstraintSet {
public:
    explicit ConstraintSet(std::vector<Constraint> entries);

    [[nodiscard]] const std::vector<Constraint>& entries() const noexcept { return entries_; }
    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
    [[nodiscard]] double max_abs_label() const noexcept;

    /// Throws InvalidArgument if any node index is >= n.
    void check_nodes(std::size_t n) const;

    [[nodiscard]] Eigen::VectorXd labels() const;

private:
    std::vector<Constraint> entries_;
};

struct LabelFunction {
    Eigen::VectorXd values;
    double energy = 0.0;  // E^(s) of `values`
    double s = 0.0;
};

/// Exact minimizer of E^(s) subject to the constraints.
///
/// The constant mode carries no energy, so the problem is solved through the
/// Green matrix G_ij = sum_{k>=2} lambda_k^-s psi_k(x_i) psi_k(x_j) on the
/// constrained nodes and the saddle system
///   [G  b] [mu]   [l]
///   [b' 0] [c1] = [0],   b_i = psi_1(x_i),
/// giving u = c1 psi_1 + sum_{k>=2} lambda_k^-s (sum_i mu_i psi_k(x_i)) psi_k.
/// Throws NumericalError when lambda_2 is numerically zero (disconnected graph)
/// or the saddle system is singular.
LabelFunction solve_constrained(const SpectralDecomposition& spec, const ConstraintSet& constraints,
                                double s);

/// Independent check for integer s: with M = laplacian^s, solves
/// M_FF u_F = -M_FC l over free nodes F.
Eigen::VectorXd brute_force_oracle(const Eigen::MatrixXd& laplacian,
                                   const ConstraintSet& constraints, int s);

/// 0 where u < threshold, 1 otherwise.
std::vector<int> classify(const Eigen::Ref<const Eigen::VectorXd>& u, double threshold = 0.5);

}  // namespace fraclap
