#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace fraclap {

/// Canonical representative of x in [0,1). Throws on non-finite input.
double wrap_unit(double x);

/// A point of the flat unit torus [0,1)^d. Coordinates are wrapped on entry.
class TorusPoint {
public:
    explicit TorusPoint(std::vector<double> coords);

    [[nodiscard]] std::size_t dim() const noexcept { return coords_.size(); }
    [[nodiscard]] std::span<const double> coords() const noexcept { return coords_; }
    [[nodiscard]] double operator[](std::size_t j) const { return coords_[j]; }

    friend bool operator==(const TorusPoint&, const TorusPoint&) = default;

private:
    std::vector<double> coords_;
};

/// Ordered, immutable point cloud on the torus. Index i identifies x_i for
/// every downstream computation; the empirical measure puts mass 1/n on each.
class SampleSet {
public:
    SampleSet() = default;

    /// Coordinates are row-major (n rows of `dim` values) and wrapped on entry.
    SampleSet(std::size_t dim, std::vector<double> coords,
              std::optional<std::uint64_t> seed = std::nullopt);

    static SampleSet from_points(const std::vector<TorusPoint>& points);

    /// Points of `head` followed by points of `tail`. The seed of `tail` is kept.
    static SampleSet concat(const SampleSet& head, const SampleSet& tail);

    [[nodiscard]] std::size_t size() const noexcept { return dim_ == 0 ? 0 : coords_.size() / dim_; }
    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] std::optional<std::uint64_t> seed() const noexcept { return seed_; }
    [[nodiscard]] std::span<const double> point(std::size_t i) const {
        return std::span<const double>(coords_).subspan(i * dim_, dim_);
    }
    [[nodiscard]] TorusPoint at(std::size_t i) const;
    [[nodiscard]] std::span<const double> flat() const noexcept { return coords_; }

private:
    std::size_t dim_ = 0;
    std::vector<double> coords_;
    std::optional<std::uint64_t> seed_;
};

/// Euclidean norm of the componentwise wrapped difference.
double torus_distance(std::span<const double> x, std::span<const double> y);
double torus_distance(const TorusPoint& x, const TorusPoint& y);

/// Squared torus distance without dimension checks (hot loops).
inline double torus_distance_sq_unchecked(const double* x, const double* y, std::size_t d) noexcept {
    double acc = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        double diff = x[j] - y[j];
        diff = diff < 0.0 ? -diff : diff;
        diff = diff > 0.5 ? 1.0 - diff : diff;
        acc += diff * diff;
    }
    return acc;
}

/// n iid uniform points on [0,1)^d drawn from CounterRng(seed), coordinates
/// consumed in row-major order.
SampleSet sample_uniform(std::size_t n, std::size_t d, std::uint64_t seed);

/// Read a headerless CSV of d columns per row; coordinates are wrapped.
SampleSet load_points(const std::filesystem::path& path, std::size_t d);

}  // namespace fraclap
