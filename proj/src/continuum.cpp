#include "fraclap/continuum.hpp"

#include "fraclap/csv.hpp"
#include "fraclap/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <string>

namespace fraclap {

namespace {

void check_grid(const PeriodicGrid& grid) {
    if (grid.m < 2) {
        throw InvalidArgument("PeriodicGrid: m must be at least 2");
    }
    if (grid.d != 1 && grid.d != 2) {
        throw InvalidArgument("PeriodicGrid: only d = 1 or d = 2 is supported");
    }
}

double signed_frequency(std::size_t p, std::size_t m) {
    return 2 * p <= m ? static_cast<double>(p) : static_cast<double>(p) - static_cast<double>(m);
}

double axis_eigenvalue(std::size_t p, const PeriodicGrid& grid, SpectrumVariant variant) {
    const double m = static_cast<double>(grid.m);
    if (variant == SpectrumVariant::FiniteDifference) {
        const double sn = std::sin(std::numbers::pi * static_cast<double>(p) / m);
        return 4.0 * m * m * sn * sn;
    }
    const double k = signed_frequency(p, grid.m);
    return 4.0 * std::numbers::pi * std::numbers::pi * k * k;
}

/// C(a, p) = cos(2 pi a p / m), with a p reduced mod m first.
Eigen::MatrixXd cosine_table(std::size_t m) {
    const auto mm = static_cast<Eigen::Index>(m);
    Eigen::MatrixXd c(mm, mm);
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t p = 0; p < m; ++p) {
            const double phase = 2.0 * std::numbers::pi * static_cast<double>((a * p) % m) /
                                 static_cast<double>(m);
            c(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(p)) = std::cos(phase);
        }
    }
    return c;
}

std::size_t wrap_index(std::ptrdiff_t i, std::size_t m) {
    const auto mm = static_cast<std::ptrdiff_t>(m);
    return static_cast<std::size_t>(((i % mm) + mm) % mm);
}

}  // namespace

std::vector<double> ContinuumSpectrum::sorted() const {
    std::vector<double> out = eigenvalues;
    std::sort(out.begin(), out.end());
    return out;
}

ContinuumSpectrum continuum_spectrum(const PeriodicGrid& grid, SpectrumVariant variant) {
    check_grid(grid);
    ContinuumSpectrum spec{grid, variant, {}};
    spec.eigenvalues.resize(grid.nodes());
    if (grid.d == 1) {
        for (std::size_t p = 0; p < grid.m; ++p) {
            spec.eigenvalues[p] = axis_eigenvalue(p, grid, variant);
        }
        return spec;
    }
    for (std::size_t p = 0; p < grid.m; ++p) {
        const double lp = axis_eigenvalue(p, grid, variant);
        for (std::size_t q = 0; q < grid.m; ++q) {
            spec.eigenvalues[p * grid.m + q] = lp + axis_eigenvalue(q, grid, variant);
        }
    }
    return spec;
}

GridFunction fractional_green(const ContinuumSpectrum& spec, double s) {
    if (!(s > 0.0)) {
        throw InvalidArgument("fractional_green: s must be positive");
    }
    const PeriodicGrid& grid = spec.grid;
    check_grid(grid);
    const auto m = static_cast<Eigen::Index>(grid.m);
    const Eigen::MatrixXd c = cosine_table(grid.m);

    // Multipliers are even in each frequency, so the sine terms cancel and
    // the inverse transform is C * Lambda * C^T.
    GridFunction g{grid, std::vector<double>(grid.nodes(), 0.0)};
    if (grid.d == 1) {
        Eigen::VectorXd mult(m);
        for (Eigen::Index p = 0; p < m; ++p) {
            mult(p) = p == 0 ? 0.0 : std::pow(spec.eigenvalues[static_cast<std::size_t>(p)], -s);
        }
        Eigen::Map<Eigen::VectorXd>(g.values.data(), m) = c * mult;
        return g;
    }
    Eigen::MatrixXd mult(m, m);
    for (Eigen::Index p = 0; p < m; ++p) {
        for (Eigen::Index q = 0; q < m; ++q) {
            const double lambda = spec.eigenvalues[static_cast<std::size_t>(p * m + q)];
            mult(p, q) = (p == 0 && q == 0) ? 0.0 : std::pow(lambda, -s);
        }
    }
    const Eigen::MatrixXd values = c * mult * c.transpose();
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        g.values.data(), m, m) = values;
    return g;
}

std::size_t snap_to_grid(const PeriodicGrid& grid, const TorusPoint& x) {
    check_grid(grid);
    if (x.dim() != grid.d) {
        throw InvalidArgument("snap_to_grid: dimension mismatch");
    }
    std::size_t index = 0;
    for (std::size_t j = 0; j < grid.d; ++j) {
        const double t = x[j] * static_cast<double>(grid.m);
        double lower = std::floor(t);
        // An exact half-way point goes to the lower node.
        const double node = (t - lower > 0.5) ? lower + 1.0 : lower;
        index = index * grid.m + wrap_index(static_cast<std::ptrdiff_t>(node), grid.m);
    }
    return index;
}

ContinuumSolution solve_continuum_constrained(const ContinuumSpectrum& spec,
                                              const std::vector<std::pair<TorusPoint, double>>& constraints,
                                              double s) {
    if (constraints.empty()) {
        throw InvalidArgument("solve_continuum_constrained: at least one constraint is required");
    }
    const PeriodicGrid& grid = spec.grid;
    const GridFunction g = fractional_green(spec, s);
    const std::size_t m = grid.m;
    const double g0 = g.values[0];
    if (!(g0 > 0.0) || !std::isfinite(g0)) {
        throw NumericalError("solve_continuum_constrained: degenerate Green function");
    }

    const auto big_n = static_cast<Eigen::Index>(constraints.size());
    ContinuumSolution out;
    out.nodes.reserve(constraints.size());
    Eigen::VectorXd labels(big_n);
    for (Eigen::Index i = 0; i < big_n; ++i) {
        const auto& [point, label] = constraints[static_cast<std::size_t>(i)];
        if (!std::isfinite(label)) {
            throw InvalidArgument("solve_continuum_constrained: non-finite label");
        }
        const std::size_t node = snap_to_grid(grid, point);
        if (std::find(out.nodes.begin(), out.nodes.end(), node) != out.nodes.end()) {
            throw InvalidArgument("solve_continuum_constrained: two constraints snap to grid node " +
                                  std::to_string(node));
        }
        out.nodes.push_back(node);
        labels(i) = label;
    }

    auto split = [&](std::size_t node) {
        return grid.d == 1 ? std::pair<std::size_t, std::size_t>{node, 0}
                           : std::pair<std::size_t, std::size_t>{node / m, node % m};
    };
    // Green function shifted so that the result is g(z_a - z_b), normalized by g(0).
    auto green_diff = [&](std::size_t a, std::size_t b) {
        const auto [pa, qa] = split(a);
        const auto [pb, qb] = split(b);
        const std::size_t p = wrap_index(static_cast<std::ptrdiff_t>(pa) - static_cast<std::ptrdiff_t>(pb), m);
        const std::size_t q = wrap_index(static_cast<std::ptrdiff_t>(qa) - static_cast<std::ptrdiff_t>(qb), m);
        return g.at(p, q) / g0;
    };

    Eigen::MatrixXd saddle = Eigen::MatrixXd::Zero(big_n + 1, big_n + 1);
    for (Eigen::Index i = 0; i < big_n; ++i) {
        for (Eigen::Index j = 0; j < big_n; ++j) {
            saddle(i, j) = green_diff(out.nodes[static_cast<std::size_t>(i)], out.nodes[static_cast<std::size_t>(j)]);
        }
        saddle(i, big_n) = 1.0;
        saddle(big_n, i) = 1.0;
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(big_n + 1);
    rhs.head(big_n) = labels;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(saddle);
    if (!lu.isInvertible()) {
        throw NumericalError("solve_continuum_constrained: singular saddle system");
    }
    const Eigen::VectorXd sol = lu.solve(rhs);
    const Eigen::VectorXd mu = sol.head(big_n);
    const double c1 = sol(big_n);

    out.u.grid = grid;
    out.u.values.assign(grid.nodes(), c1);
    for (std::size_t node = 0; node < grid.nodes(); ++node) {
        double acc = 0.0;
        for (Eigen::Index i = 0; i < big_n; ++i) {
            acc += mu(i) * green_diff(node, out.nodes[static_cast<std::size_t>(i)]);
        }
        out.u.values[node] += acc;
    }
    out.energy = mu.dot(saddle.topLeftCorner(big_n, big_n) * mu) / g0;
    return out;
}

double continuum_energy(const ContinuumSpectrum& spec, const GridFunction& u, double s) {
    if (!(s > 0.0)) {
        throw InvalidArgument("continuum_energy: s must be positive");
    }
    if (u.grid.m != spec.grid.m || u.grid.d != spec.grid.d || u.values.size() != spec.eigenvalues.size()) {
        throw InvalidArgument("continuum_energy: grid mismatch");
    }
    const std::size_t m = spec.grid.m;
    const auto mm = static_cast<Eigen::Index>(m);
    Eigen::MatrixXcd dft(mm, mm);
    for (std::size_t p = 0; p < m; ++p) {
        for (std::size_t a = 0; a < m; ++a) {
            const double phase = -2.0 * std::numbers::pi * static_cast<double>((a * p) % m) /
                                 static_cast<double>(m);
            dft(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(a)) = std::polar(1.0, phase);
        }
    }
    double energy = 0.0;
    if (spec.grid.d == 1) {
        const Eigen::VectorXcd hat =
            dft * Eigen::Map<const Eigen::VectorXd>(u.values.data(), mm).cast<std::complex<double>>() /
            static_cast<double>(m);
        for (Eigen::Index p = 1; p < mm; ++p) {
            energy += std::pow(spec.eigenvalues[static_cast<std::size_t>(p)], s) * std::norm(hat(p));
        }
        return energy;
    }
    const Eigen::MatrixXd values =
        Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
            u.values.data(), mm, mm);
    const Eigen::MatrixXcd hat =
        dft * values.cast<std::complex<double>>() * dft.transpose() / static_cast<double>(m * m);
    for (Eigen::Index p = 0; p < mm; ++p) {
        for (Eigen::Index q = 0; q < mm; ++q) {
            if (p == 0 && q == 0) {
                continue;
            }
            energy += std::pow(spec.eigenvalues[static_cast<std::size_t>(p * mm + q)], s) *
                      std::norm(hat(p, q));
        }
    }
    return energy;
}

namespace {

struct AxisStencil {
    std::size_t base;  // grid index of the node at or below the query
    double frac;       // offset in [0, 1)
};

AxisStencil locate(double x, std::size_t m) {
    const double t = x * static_cast<double>(m);
    double lower = std::floor(t);
    double frac = t - lower;
    // Snap queries that are grid nodes up to rounding so nodes reproduce exactly.
    if (frac < 1e-12) {
        frac = 0.0;
    } else if (frac > 1.0 - 1e-12) {
        lower += 1.0;
        frac = 0.0;
    }
    return {wrap_index(static_cast<std::ptrdiff_t>(lower), m), frac};
}

/// Weights for nodes base-1 .. base+2.
std::array<double, 4> catmull_rom(double f) {
    const double f2 = f * f;
    const double f3 = f2 * f;
    return {0.5 * (-f3 + 2.0 * f2 - f), 0.5 * (3.0 * f3 - 5.0 * f2 + 2.0),
            0.5 * (-3.0 * f3 + 4.0 * f2 + f), 0.5 * (f3 - f2)};
}

std::array<double, 4> linear(double f) { return {0.0, 1.0 - f, f, 0.0}; }

}  // namespace

std::vector<double> interpolate(const GridFunction& fn, const SampleSet& queries, Interpolation scheme) {
    const PeriodicGrid& grid = fn.grid;
    check_grid(grid);
    if (fn.values.size() != grid.nodes()) {
        throw InvalidArgument("interpolate: grid function has the wrong size");
    }
    for (double v : fn.values) {
        if (!std::isfinite(v)) {
            throw InvalidArgument("interpolate: grid function is not finite");
        }
    }
    if (queries.size() > 0 && queries.dim() != grid.d) {
        throw InvalidArgument("interpolate: query dimension does not match the grid");
    }
    const std::size_t m = grid.m;
    auto weights = [scheme](double f) {
        return scheme == Interpolation::Bicubic ? catmull_rom(f) : linear(f);
    };

    std::vector<double> out(queries.size());
    for (std::size_t i = 0; i < queries.size(); ++i) {
        const auto x = queries.point(i);
        const AxisStencil sx = locate(x[0], m);
        const auto wx = weights(sx.frac);
        if (grid.d == 1) {
            double acc = 0.0;
            for (int a = 0; a < 4; ++a) {
                if (wx[static_cast<std::size_t>(a)] == 0.0) {
                    continue;
                }
                acc += wx[static_cast<std::size_t>(a)] *
                       fn.values[wrap_index(static_cast<std::ptrdiff_t>(sx.base) + a - 1, m)];
            }
            out[i] = acc;
            continue;
        }
        const AxisStencil sy = locate(x[1], m);
        const auto wy = weights(sy.frac);
        double acc = 0.0;
        for (int a = 0; a < 4; ++a) {
            const double wa = wx[static_cast<std::size_t>(a)];
            if (wa == 0.0) {
                continue;
            }
            const std::size_t p = wrap_index(static_cast<std::ptrdiff_t>(sx.base) + a - 1, m);
            for (int b = 0; b < 4; ++b) {
                const double wb = wy[static_cast<std::size_t>(b)];
                if (wb == 0.0) {
                    continue;
                }
                const std::size_t q = wrap_index(static_cast<std::ptrdiff_t>(sy.base) + b - 1, m);
                acc += wa * wb * fn.values[p * m + q];
            }
        }
        out[i] = acc;
    }
    return out;
}

double l2_mu_n_error(const Eigen::Ref<const Eigen::VectorXd>& u_n,
                     const Eigen::Ref<const Eigen::VectorXd>& u_at_nodes) {
    if (u_n.size() != u_at_nodes.size()) {
        throw InvalidArgument("l2_mu_n_error: length mismatch");
    }
    if (u_n.size() == 0) {
        throw InvalidArgument("l2_mu_n_error: empty input");
    }
    return std::sqrt((u_n - u_at_nodes).squaredNorm() / static_cast<double>(u_n.size()));
}

void write_grid_csv(const GridFunction& fn, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    const std::size_t m = fn.grid.m;
    const std::size_t cols = fn.grid.d == 1 ? 1 : m;
    for (std::size_t p = 0; p < m; ++p) {
        for (std::size_t q = 0; q < cols; ++q) {
            if (q > 0) {
                out << ',';
            }
            out << csv::format_double(fn.values[p * cols + q]);
        }
        out << '\n';
    }
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

}  // namespace fraclap
