#include "fraclap/ssl.hpp"

#include "fraclap/error.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>

namespace fraclap {

ConstraintSet::ConstraintSet(std::vector<Constraint> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) {
        throw InvalidArgument("ConstraintSet: at least one constraint is required");
    }
    std::unordered_set<std::size_t> seen;
    for (const auto& c : entries_) {
        if (!std::isfinite(c.label)) {
            throw InvalidArgument("ConstraintSet: non-finite label at node " + std::to_string(c.node));
        }
        if (!seen.insert(c.node).second) {
            throw InvalidArgument("ConstraintSet: duplicate constraint on node " +
                                  std::to_string(c.node));
        }
    }
}

double ConstraintSet::max_abs_label() const noexcept {
    double m = 0.0;
    for (const auto& c : entries_) {
        m = std::max(m, std::abs(c.label));
    }
    return m;
}

void ConstraintSet::check_nodes(std::size_t n) const {
    for (const auto& c : entries_) {
        if (c.node >= n) {
            throw InvalidArgument("ConstraintSet: node " + std::to_string(c.node) +
                                  " out of range for " + std::to_string(n) + " nodes");
        }
    }
}

Eigen::VectorXd ConstraintSet::labels() const {
    Eigen::VectorXd out(static_cast<Eigen::Index>(entries_.size()));
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        out(static_cast<Eigen::Index>(i)) = entries_[i].label;
    }
    return out;
}

LabelFunction solve_constrained(const SpectralDecomposition& spec, const ConstraintSet& constraints,
                                double s) {
    if (!(s > 0.0) || !std::isfinite(s)) {
        throw InvalidArgument("solve_constrained: s must be positive");
    }
    const std::size_t n = spec.size();
    if (n == 0) {
        throw InvalidArgument("solve_constrained: empty decomposition");
    }
    constraints.check_nodes(n);
    const auto nn = static_cast<Eigen::Index>(n);
    const auto big_n = static_cast<Eigen::Index>(constraints.size());

    LabelFunction result;
    result.s = s;
    if (n == 1) {
        result.values = Eigen::VectorXd::Constant(1, constraints.entries().front().label);
        return result;
    }

    const double top = std::max(spec.eigenvalues(nn - 1), 1.0);
    const double lambda2 = spec.eigenvalues(1);
    if (!(lambda2 > 1e-10 * top)) {
        throw NumericalError(
            "solve_constrained: zero eigenvalue multiplicity > 1 (graph is disconnected)");
    }

    // Multipliers scaled by (lambda_2 / lambda_k)^s keep G of order one.
    Eigen::VectorXd mode_weight(nn);
    mode_weight(0) = 0.0;
    for (Eigen::Index k = 1; k < nn; ++k) {
        mode_weight(k) = std::pow(lambda2 / spec.eigenvalues(k), s);
    }

    Eigen::MatrixXd psi_c(big_n, nn);
    Eigen::VectorXd b(big_n);
    for (Eigen::Index i = 0; i < big_n; ++i) {
        const auto node = static_cast<Eigen::Index>(constraints.entries()[static_cast<std::size_t>(i)].node);
        psi_c.row(i) = spec.eigenvectors.row(node);
        b(i) = spec.eigenvectors(node, 0);
    }

    Eigen::MatrixXd saddle = Eigen::MatrixXd::Zero(big_n + 1, big_n + 1);
    saddle.topLeftCorner(big_n, big_n) = psi_c * mode_weight.asDiagonal() * psi_c.transpose();
    saddle.topRightCorner(big_n, 1) = b;
    saddle.bottomLeftCorner(1, big_n) = b.transpose();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(big_n + 1);
    rhs.head(big_n) = constraints.labels();

    Eigen::FullPivLU<Eigen::MatrixXd> lu(saddle);
    if (!lu.isInvertible()) {
        throw NumericalError("solve_constrained: singular saddle system");
    }
    const Eigen::VectorXd sol = lu.solve(rhs);
    const Eigen::VectorXd mu = sol.head(big_n);
    const double c1 = sol(big_n);

    const Eigen::VectorXd beta = psi_c.transpose() * mu;
    const Eigen::VectorXd coeff = mode_weight.cwiseProduct(beta);
    result.values = c1 * spec.eigenvectors.col(0) + spec.eigenvectors * coeff;
    // E = sum_k lambda_k^-s beta_k^2 in unscaled multipliers.
    result.energy = std::pow(lambda2, s) * coeff.dot(beta);
    return result;
}

Eigen::VectorXd brute_force_oracle(const Eigen::MatrixXd& laplacian,
                                   const ConstraintSet& constraints, int s) {
    if (s < 1) {
        throw InvalidArgument("brute_force_oracle: s must be a positive integer");
    }
    const Eigen::Index n = laplacian.rows();
    if (n == 0 || laplacian.cols() != n) {
        throw InvalidArgument("brute_force_oracle: matrix must be square and nonempty");
    }
    constraints.check_nodes(static_cast<std::size_t>(n));

    Eigen::MatrixXd power = laplacian;
    for (int k = 1; k < s; ++k) {
        power = (power * laplacian).eval();
    }

    std::vector<char> fixed(static_cast<std::size_t>(n), 0);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
    for (const auto& c : constraints.entries()) {
        fixed[c.node] = 1;
        u(static_cast<Eigen::Index>(c.node)) = c.label;
    }
    std::vector<Eigen::Index> free_nodes;
    std::vector<Eigen::Index> fixed_nodes;
    for (Eigen::Index i = 0; i < n; ++i) {
        (fixed[static_cast<std::size_t>(i)] ? fixed_nodes : free_nodes).push_back(i);
    }
    if (free_nodes.empty()) {
        return u;
    }

    const auto nf = static_cast<Eigen::Index>(free_nodes.size());
    const auto nc = static_cast<Eigen::Index>(fixed_nodes.size());
    Eigen::MatrixXd m_ff(nf, nf);
    Eigen::MatrixXd m_fc(nf, nc);
    Eigen::VectorXd l_c(nc);
    for (Eigen::Index a = 0; a < nf; ++a) {
        for (Eigen::Index b = 0; b < nf; ++b) {
            m_ff(a, b) = power(free_nodes[static_cast<std::size_t>(a)], free_nodes[static_cast<std::size_t>(b)]);
        }
        for (Eigen::Index b = 0; b < nc; ++b) {
            m_fc(a, b) = power(free_nodes[static_cast<std::size_t>(a)], fixed_nodes[static_cast<std::size_t>(b)]);
        }
    }
    for (Eigen::Index b = 0; b < nc; ++b) {
        l_c(b) = u(fixed_nodes[static_cast<std::size_t>(b)]);
    }

    Eigen::FullPivLU<Eigen::MatrixXd> lu(m_ff);
    if (!lu.isInvertible()) {
        throw NumericalError("brute_force_oracle: singular free-node block (graph is disconnected)");
    }
    const Eigen::VectorXd u_free = lu.solve(-m_fc * l_c);
    for (Eigen::Index a = 0; a < nf; ++a) {
        u(free_nodes[static_cast<std::size_t>(a)]) = u_free(a);
    }
    return u;
}

std::vector<int> classify(const Eigen::Ref<const Eigen::VectorXd>& u, double threshold) {
    std::vector<int> out(static_cast<std::size_t>(u.size()));
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        out[static_cast<std::size_t>(i)] = u(i) < threshold ? 0 : 1;
    }
    return out;
}

}  // namespace fraclap
