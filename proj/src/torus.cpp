#include "fraclap/torus.hpp"

#include "fraclap/csv.hpp"
#include "fraclap/error.hpp"
#include "fraclap/rng.hpp"

#include <cmath>
#include <string>

namespace fraclap {

double wrap_unit(double x) {
    if (!std::isfinite(x)) {
        throw InvalidArgument("wrap_unit: non-finite coordinate");
    }
    double r = x - std::floor(x);
    // x slightly below an integer can round up to exactly 1.
    return r >= 1.0 ? 0.0 : r;
}

TorusPoint::TorusPoint(std::vector<double> coords) : coords_(std::move(coords)) {
    if (coords_.empty()) {
        throw InvalidArgument("TorusPoint: dimension must be positive");
    }
    for (double& c : coords_) {
        c = wrap_unit(c);
    }
}

SampleSet::SampleSet(std::size_t dim, std::vector<double> coords, std::optional<std::uint64_t> seed)
    : dim_(dim), coords_(std::move(coords)), seed_(seed) {
    if (dim_ == 0) {
        throw InvalidArgument("SampleSet: dimension must be positive");
    }
    if (coords_.size() % dim_ != 0) {
        throw InvalidArgument("SampleSet: coordinate count is not a multiple of the dimension");
    }
    for (double& c : coords_) {
        c = wrap_unit(c);
    }
}

SampleSet SampleSet::from_points(const std::vector<TorusPoint>& points) {
    if (points.empty()) {
        throw InvalidArgument("SampleSet::from_points: empty point list");
    }
    const std::size_t d = points.front().dim();
    std::vector<double> coords;
    coords.reserve(points.size() * d);
    for (const auto& p : points) {
        if (p.dim() != d) {
            throw InvalidArgument("SampleSet::from_points: mixed dimensions");
        }
        coords.insert(coords.end(), p.coords().begin(), p.coords().end());
    }
    return {d, std::move(coords)};
}

SampleSet SampleSet::concat(const SampleSet& head, const SampleSet& tail) {
    if (head.size() == 0) {
        return tail;
    }
    if (tail.size() == 0) {
        return head;
    }
    if (head.dim() != tail.dim()) {
        throw InvalidArgument("SampleSet::concat: dimension mismatch");
    }
    std::vector<double> coords(head.flat().begin(), head.flat().end());
    coords.insert(coords.end(), tail.flat().begin(), tail.flat().end());
    return {head.dim(), std::move(coords), tail.seed()};
}

TorusPoint SampleSet::at(std::size_t i) const {
    auto p = point(i);
    return TorusPoint(std::vector<double>(p.begin(), p.end()));
}

double torus_distance(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw InvalidArgument("torus_distance: dimension mismatch (" + std::to_string(x.size()) +
                              " vs " + std::to_string(y.size()) + ")");
    }
    return std::sqrt(torus_distance_sq_unchecked(x.data(), y.data(), x.size()));
}

double torus_distance(const TorusPoint& x, const TorusPoint& y) {
    return torus_distance(x.coords(), y.coords());
}

SampleSet sample_uniform(std::size_t n, std::size_t d, std::uint64_t seed) {
    if (n == 0) {
        throw InvalidArgument("sample_uniform: n must be at least 1");
    }
    if (d == 0) {
        throw InvalidArgument("sample_uniform: d must be at least 1");
    }
    CounterRng rng(seed);
    std::vector<double> coords(n * d);
    for (double& c : coords) {
        c = rng.uniform();
    }
    return {d, std::move(coords), seed};
}

SampleSet load_points(const std::filesystem::path& path, std::size_t d) {
    if (d == 0) {
        throw InvalidArgument("load_points: d must be at least 1");
    }
    auto table = csv::read_numeric(path, d, /*allow_header=*/false);
    if (table.rows() == 0) {
        throw IoError(path.string() + ": no points");
    }
    return {d, std::move(table.values)};
}

}  // namespace fraclap
