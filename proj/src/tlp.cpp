#include "fraclap/tlp.hpp"

#include "fraclap/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace fraclap {

EmpiricalPair::EmpiricalPair(SampleSet pts, std::vector<double> vals)
    : points(std::move(pts)), values(std::move(vals)) {
    if (points.size() != values.size()) {
        throw InvalidArgument("EmpiricalPair: " + std::to_string(points.size()) + " points but " +
                              std::to_string(values.size()) + " values");
    }
    if (points.size() == 0) {
        throw InvalidArgument("EmpiricalPair: empty measure");
    }
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw InvalidArgument("EmpiricalPair: non-finite value");
        }
    }
}

Assignment linear_assignment(const Eigen::MatrixXd& cost) {
    const auto n = static_cast<std::size_t>(cost.rows());
    if (cost.cols() != cost.rows()) {
        throw InvalidArgument("linear_assignment: cost matrix must be square");
    }
    if (n == 0) {
        return {};
    }
    if (!cost.allFinite()) {
        throw InvalidArgument("linear_assignment: non-finite cost");
    }
    constexpr double kInf = std::numeric_limits<double>::infinity();
    // 1-based shortest augmenting path formulation; column 0 is a sentinel.
    std::vector<double> row_pot(n + 1, 0.0);
    std::vector<double> col_pot(n + 1, 0.0);
    std::vector<std::size_t> col_match(n + 1, 0);
    std::vector<std::size_t> way(n + 1, 0);
    for (std::size_t row = 1; row <= n; ++row) {
        col_match[0] = row;
        std::size_t col0 = 0;
        std::vector<double> min_slack(n + 1, kInf);
        std::vector<char> used(n + 1, 0);
        do {
            used[col0] = 1;
            const std::size_t r = col_match[col0];
            double delta = kInf;
            std::size_t col1 = 0;
            for (std::size_t c = 1; c <= n; ++c) {
                if (used[c]) {
                    continue;
                }
                const double reduced = cost(static_cast<Eigen::Index>(r - 1), static_cast<Eigen::Index>(c - 1)) -
                                       row_pot[r] - col_pot[c];
                if (reduced < min_slack[c]) {
                    min_slack[c] = reduced;
                    way[c] = col0;
                }
                if (min_slack[c] < delta) {
                    delta = min_slack[c];
                    col1 = c;
                }
            }
            for (std::size_t c = 0; c <= n; ++c) {
                if (used[c]) {
                    row_pot[col_match[c]] += delta;
                    col_pot[c] -= delta;
                } else {
                    min_slack[c] -= delta;
                }
            }
            col0 = col1;
        } while (col_match[col0] != 0);
        do {
            const std::size_t col1 = way[col0];
            col_match[col0] = col_match[col1];
            col0 = col1;
        } while (col0 != 0);
    }

    Assignment result;
    result.target.assign(n, 0);
    for (std::size_t c = 1; c <= n; ++c) {
        result.target[col_match[c] - 1] = c - 1;
    }
    for (std::size_t r = 0; r < n; ++r) {
        result.cost += cost(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(result.target[r]));
    }
    return result;
}

double tl2_distance(const EmpiricalPair& a, const EmpiricalPair& b) {
    const std::size_t n = a.points.size();
    if (b.points.size() != n) {
        throw InvalidArgument("tl2_distance: measures must have the same number of atoms (" +
                              std::to_string(n) + " vs " + std::to_string(b.points.size()) + ")");
    }
    if (a.points.dim() != b.points.dim()) {
        throw InvalidArgument("tl2_distance: dimension mismatch");
    }
    const std::size_t d = a.points.dim();
    const auto nn = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd cost(nn, nn);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double gap = a.values[i] - b.values[j];
            cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                torus_distance_sq_unchecked(a.points.point(i).data(), b.points.point(j).data(), d) +
                gap * gap;
        }
    }
    return linear_assignment(cost).cost / static_cast<double>(n);
}

TransportMap nearest_transport_map(const SampleSet& from, const SampleSet& to) {
    if (from.size() == 0 || to.size() == 0) {
        throw InvalidArgument("nearest_transport_map: empty sample set");
    }
    if (from.dim() != to.dim()) {
        throw InvalidArgument("nearest_transport_map: dimension mismatch");
    }
    const std::size_t d = from.dim();
    TransportMap map;
    map.target.resize(from.size());
    double sup_sq = 0.0;
    for (std::size_t i = 0; i < from.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t arg = 0;
        for (std::size_t j = 0; j < to.size(); ++j) {
            const double dsq = torus_distance_sq_unchecked(from.point(i).data(), to.point(j).data(), d);
            if (dsq < best) {
                best = dsq;
                arg = j;
            }
        }
        map.target[i] = arg;
        sup_sq = std::max(sup_sq, best);
    }
    map.sup_displacement = std::sqrt(sup_sq);
    return map;
}

}  // namespace fraclap
