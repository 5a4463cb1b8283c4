#include "fraclap/graph.hpp"

#include "fraclap/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

namespace fraclap {

Kernel Kernel::indicator() { return {KernelKind::Indicator, {}, false}; }

Kernel Kernel::custom(std::function<double(double)> profile, bool normalized) {
    if (!profile) {
        throw InvalidArgument("Kernel::custom: empty profile");
    }
    constexpr int kChecks = 1000;
    double previous = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= kChecks; ++i) {
        const double t = static_cast<double>(i) / kChecks;
        const double v = profile(t);
        if (!std::isfinite(v) || v < 0.0) {
            throw InvalidArgument("Kernel::custom: profile must be finite and nonnegative (t = " +
                                  std::to_string(t) + ")");
        }
        if (v > previous * (1.0 + 1e-12)) {
            throw InvalidArgument("Kernel::custom: profile must be nonincreasing (t = " +
                                  std::to_string(t) + ")");
        }
        previous = v;
    }
    return {KernelKind::Custom, std::move(profile), normalized};
}

double Kernel::support_radius(double tol) const {
    if (kind_ == KernelKind::Indicator) {
        return 1.0;
    }
    if ((*this)(1.0) > 0.0) {
        return 1.0;
    }
    if ((*this)(0.0) <= 0.0) {
        throw InvalidArgument("Kernel: profile vanishes at 0");
    }
    double lo = 0.0;
    double hi = 1.0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if ((*this)(mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double sigma_eta(const Kernel& kernel, std::size_t d) {
    if (d == 0) {
        throw InvalidArgument("sigma_eta: dimension must be positive");
    }
    const double dd = static_cast<double>(d);
    // Surface area of the unit sphere S^{d-1}.
    const double sphere = 2.0 * std::pow(std::numbers::pi, dd / 2.0) / std::tgamma(dd / 2.0);
    if (kernel.kind() == KernelKind::Indicator) {
        return sphere / (dd * (dd + 2.0));
    }
    const double radius = kernel.support_radius();
    auto integrand = [&](double r) { return kernel(r) * std::pow(r, dd + 1.0); };
    double error = 0.0;
    const double radial = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        integrand, 0.0, radius, 30, 1e-10, &error);
    if (!std::isfinite(radial) || radial <= 0.0) {
        throw InvalidArgument("sigma_eta: profile is not integrable or has zero mass");
    }
    return sphere * radial / dd;
}

WeightedGraph build_weight_matrix(const SampleSet& points, double eps, const Kernel& kernel) {
    if (!(eps > 0.0) || !std::isfinite(eps)) {
        throw InvalidArgument("build_weight_matrix: eps must be positive and finite");
    }
    const std::size_t n = points.size();
    const std::size_t d = points.dim();
    if (n == 0) {
        throw InvalidArgument("build_weight_matrix: empty sample set");
    }
    WeightedGraph g;
    g.n = n;
    g.dim = d;
    g.eps = eps;
    g.sigma_eta = sigma_eta(kernel, d);
    g.kernel_kind = kernel.kind();
    g.weights.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));

    const double scale = std::pow(eps, -static_cast<double>(d));
    const double* xs = points.flat().data();
    for (std::size_t j = 0; j < n; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        g.weights(jj, jj) = scale * kernel(0.0);
        for (std::size_t i = j + 1; i < n; ++i) {
            const double dist = std::sqrt(torus_distance_sq_unchecked(xs + i * d, xs + j * d, d));
            const double w = scale * kernel(dist / eps);
            const auto ii = static_cast<Eigen::Index>(i);
            g.weights(ii, jj) = w;
            g.weights(jj, ii) = w;
        }
    }
    g.degrees = g.weights.rowwise().sum();
    return g;
}

Eigen::MatrixXd graph_laplacian(const WeightedGraph& g) {
    const auto n = static_cast<Eigen::Index>(g.n);
    if (g.weights.rows() != n || g.weights.cols() != n || g.n == 0 || !(g.sigma_eta > 0.0)) {
        throw InvalidArgument("graph_laplacian: malformed graph");
    }
    const double c = 2.0 / (g.sigma_eta * static_cast<double>(g.n) * g.eps * g.eps);
    Eigen::MatrixXd lap = -c * g.weights;
    // D - W with the self-weight cancelled: the diagonal is the off-diagonal row sum.
    for (Eigen::Index i = 0; i < n; ++i) {
        lap(i, i) = 0.0;
        lap(i, i) = -lap.col(i).sum();
    }
    return lap;
}

namespace {

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n), components_(n) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) {
            parent_[std::max(a, b)] = std::min(a, b);
            --components_;
        }
    }

    [[nodiscard]] std::size_t components() const noexcept { return components_; }

private:
    std::vector<std::size_t> parent_;
    std::size_t components_;
};

}  // namespace

bool is_connected(const WeightedGraph& g) {
    if (g.n <= 1) {
        return true;
    }
    DisjointSets sets(g.n);
    const auto n = static_cast<Eigen::Index>(g.n);
    for (Eigen::Index j = 0; j < n && sets.components() > 1; ++j) {
        for (Eigen::Index i = j + 1; i < n; ++i) {
            if (g.weights(i, j) > 0.0) {
                sets.unite(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
            }
        }
    }
    return sets.components() == 1;
}

double connectivity_radius(const SampleSet& points, const Kernel& kernel, double tol) {
    const std::size_t n = points.size();
    if (n < 2) {
        throw InvalidArgument("connectivity_radius: need at least 2 points");
    }
    if (!(tol > 0.0)) {
        throw InvalidArgument("connectivity_radius: tol must be positive");
    }
    const std::size_t d = points.dim();
    const double* xs = points.flat().data();

    // Dense Prim on squared torus distances; the bottleneck is the largest tree edge.
    std::vector<double> best(n, std::numeric_limits<double>::infinity());
    std::vector<char> in_tree(n, 0);
    std::size_t current = 0;
    in_tree[0] = 1;
    double bottleneck_sq = 0.0;
    for (std::size_t added = 1; added < n; ++added) {
        std::size_t next = n;
        double next_sq = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            if (in_tree[i]) {
                continue;
            }
            const double dsq = torus_distance_sq_unchecked(xs + i * d, xs + current * d, d);
            best[i] = std::min(best[i], dsq);
            if (best[i] < next_sq) {
                next_sq = best[i];
                next = i;
            }
        }
        in_tree[next] = 1;
        bottleneck_sq = std::max(bottleneck_sq, next_sq);
        current = next;
    }
    return std::sqrt(bottleneck_sq) / kernel.support_radius(tol);
}

}  // namespace fraclap
