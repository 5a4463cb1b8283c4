#include "fraclap/continuum.hpp"
#include "fraclap/error.hpp"
#include "fraclap/ssl.hpp"

#include "../support/generators.hpp"

#include <doctest.h>

#include <numbers>

using namespace fraclap;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<std::pair<TorusPoint, double>> diagonal_labels() {
    return {{TorusPoint({0.1, 0.1}), 0.0}, {TorusPoint({0.9, 0.9}), 1.0}};
}

/// Five-point periodic stencil (1/h^2)(4u - neighbours) as a dense matrix.
Eigen::MatrixXd fd_matrix(std::size_t m) {
    const auto mm = static_cast<Eigen::Index>(m);
    const double h2inv = static_cast<double>(m * m);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(mm * mm, mm * mm);
    auto idx = [mm](Eigen::Index p, Eigen::Index q) { return ((p + mm) % mm) * mm + ((q + mm) % mm); };
    for (Eigen::Index p = 0; p < mm; ++p) {
        for (Eigen::Index q = 0; q < mm; ++q) {
            const auto i = idx(p, q);
            a(i, i) += 4.0 * h2inv;
            a(i, idx(p + 1, q)) -= h2inv;
            a(i, idx(p - 1, q)) -= h2inv;
            a(i, idx(p, q + 1)) -= h2inv;
            a(i, idx(p, q - 1)) -= h2inv;
        }
    }
    return a;
}

}  // namespace

TEST_CASE("spectrum closed forms") {
    const PeriodicGrid grid{100, 2};
    const auto fd = continuum_spectrum(grid, SpectrumVariant::FiniteDifference);
    const auto an = continuum_spectrum(grid, SpectrumVariant::Analytic);
    REQUIRE(fd.eigenvalues.size() == 10000);
    CHECK(fd.eigenvalues[0] == 0.0);
    CHECK(an.eigenvalues[0] == 0.0);

    const double fd_min = fd.sorted()[1];
    const double symbol = 4.0 * 10000.0 * std::pow(std::sin(kPi / 100.0), 2);
    CHECK(fd_min == doctest::Approx(symbol).epsilon(1e-13));
    CHECK(fd_min == doctest::Approx(39.465).epsilon(1e-4));
    CHECK(an.sorted()[1] == doctest::Approx(4.0 * kPi * kPi).epsilon(1e-14));
    CHECK(an.eigenvalues[1 * 100 + 99] == doctest::Approx(8.0 * kPi * kPi).epsilon(1e-14));

    // symbol expansion: relative gap (pi h)^2/3 to leading order
    const double rel = std::abs(fd_min - 4.0 * kPi * kPi) / (4.0 * kPi * kPi);
    CHECK(rel <= std::pow(kPi / 100.0, 2) / 3.0 * 1.1);
    CHECK(rel <= 3.7e-4);

    const auto line = continuum_spectrum(PeriodicGrid{8, 1}, SpectrumVariant::Analytic);
    CHECK(line.eigenvalues[5] == doctest::Approx(4.0 * kPi * kPi * 9.0));

    CHECK_THROWS_AS(continuum_spectrum(PeriodicGrid{1, 2}, SpectrumVariant::Analytic), InvalidArgument);
    CHECK_THROWS_AS(continuum_spectrum(PeriodicGrid{8, 3}, SpectrumVariant::Analytic), InvalidArgument);
}

TEST_CASE("Weyl sandwich for the analytic spectrum") {
    // Oracle: enumerate |k|^2 over the integer lattice directly.
    std::vector<long> squares;
    for (long a = -40; a <= 40; ++a) {
        for (long b = -40; b <= 40; ++b) {
            squares.push_back(a * a + b * b);
        }
    }
    std::sort(squares.begin(), squares.end());
    const auto sorted = continuum_spectrum(PeriodicGrid{100, 2}, SpectrumVariant::Analytic).sorted();
    const double base = 4.0 * kPi * kPi;
    for (std::size_t k = 2; k <= 2000; ++k) {
        const double lambda = sorted[k - 1];
        REQUIRE(lambda == doctest::Approx(base * static_cast<double>(squares[k - 1])).epsilon(1e-14));
        const double kk = static_cast<double>(k);
        // k = 5 meets the lower constant with equality (lambda_5 = 4 pi^2 = 0.2 * 4 pi^2 * 5)
        REQUIRE(0.2 * base * kk <= lambda * (1.0 + 1e-12));
        REQUIRE(lambda <= 5.0 * base * kk);
    }
}

TEST_CASE("fractional Green function") {
    const PeriodicGrid grid{16, 2};
    const auto spec = continuum_spectrum(grid, SpectrumVariant::FiniteDifference);
    const auto g = fractional_green(spec, 1.0);
    double mean = 0.0;
    double peak = 0.0;
    for (double v : g.values) {
        mean += v;
        peak = std::max(peak, std::abs(v));
    }
    CHECK(std::abs(mean / 256.0) <= 1e-10 * peak);
    for (std::size_t p = 0; p < 16; ++p) {
        for (std::size_t q = 0; q < 16; ++q) {
            REQUIRE(std::abs(g.at(p, q) - g.at((16 - p) % 16, (16 - q) % 16)) <= 1e-10 * peak);
        }
    }

    // brute-force sum over the 255 nonzero modes
    auto brute = [&](double z1, double z2) {
        double acc = 0.0;
        for (int a = 0; a < 16; ++a) {
            for (int b = 0; b < 16; ++b) {
                if (a == 0 && b == 0) {
                    continue;
                }
                const double lambda = 4.0 * 256.0 *
                                      (std::pow(std::sin(kPi * a / 16.0), 2) + std::pow(std::sin(kPi * b / 16.0), 2));
                acc += std::cos(2.0 * kPi * (a * z1 + b * z2)) / lambda;
            }
        }
        return acc;
    };
    CHECK(g.at(0, 0) == doctest::Approx(brute(0.0, 0.0)).epsilon(1e-12));
    CHECK(g.at(8, 8) == doctest::Approx(brute(0.5, 0.5)).epsilon(1e-12));
    CHECK(g.at(3, 11) == doctest::Approx(brute(3.0 / 16.0, 11.0 / 16.0)).epsilon(1e-12));
    CHECK(g.at(0, 0) - g.at(8, 8) > 0.0);

    CHECK_THROWS_AS(fractional_green(spec, 0.0), InvalidArgument);
}

TEST_CASE("snap_to_grid rounds to the nearest node, ties down") {
    const PeriodicGrid grid{10, 2};
    CHECK(snap_to_grid(grid, TorusPoint({0.12, 0.18})) == 1 * 10 + 2);
    CHECK(snap_to_grid(grid, TorusPoint({0.05, 0.25})) == 0 * 10 + 2);
    CHECK(snap_to_grid(grid, TorusPoint({0.97, 0.0})) == 0);
    CHECK(snap_to_grid(PeriodicGrid{100, 2}, TorusPoint({0.1, 0.9})) == 10 * 100 + 90);
}

TEST_CASE("constrained continuum solutions") {
    const auto spec = continuum_spectrum(PeriodicGrid{32, 2}, SpectrumVariant::FiniteDifference);

    const auto single = solve_continuum_constrained(spec, {{TorusPoint({0.3, 0.6}), 2.5}}, 4.0);
    for (double v : single.u.values) {
        REQUIRE(v == doctest::Approx(2.5).epsilon(1e-12));
    }
    CHECK(single.energy == doctest::Approx(0.0));

    CHECK_THROWS_AS(solve_continuum_constrained(spec, {{TorusPoint({0.3, 0.3}), 0.0}, {TorusPoint({0.301, 0.3}), 1.0}}, 2.0),
                    InvalidArgument);
    CHECK_THROWS_AS(solve_continuum_constrained(spec, {}, 2.0), InvalidArgument);

    const auto three = std::vector<std::pair<TorusPoint, double>>{
        {TorusPoint({0.2, 0.7}), 1.0}, {TorusPoint({0.6, 0.1}), -0.5}, {TorusPoint({0.45, 0.45}), 0.25}};
    const auto sol = solve_continuum_constrained(spec, three, 3.0);
    for (std::size_t i = 0; i < three.size(); ++i) {
        REQUIRE(std::abs(sol.u.values[sol.nodes[i]] - three[i].second) <= 1e-7);
    }
    CHECK(sol.energy == doctest::Approx(continuum_energy(spec, sol.u, 3.0)).epsilon(1e-8));

    auto reordered = three;
    std::swap(reordered[0], reordered[2]);
    CHECK(solve_continuum_constrained(spec, reordered, 3.0).energy == doctest::Approx(sol.energy).epsilon(1e-10));
}

TEST_CASE("diagonal label configuration is symmetric about the centre") {
    const auto spec = continuum_spectrum(PeriodicGrid{100, 2}, SpectrumVariant::FiniteDifference);
    const auto sol = solve_continuum_constrained(spec, diagonal_labels(), 16.0);
    CHECK(std::abs(sol.u.at(50, 50) - 0.5) <= 1e-6);
    CHECK(std::abs(sol.u.at(10, 10)) <= 1e-7);
    CHECK(std::abs(sol.u.at(90, 90) - 1.0) <= 1e-7);
}

TEST_CASE("grid solve matches a dense stencil oracle") {
    const std::size_t m = 24;
    const auto spec = continuum_spectrum(PeriodicGrid{m, 2}, SpectrumVariant::FiniteDifference);
    const auto labels = std::vector<std::pair<TorusPoint, double>>{{TorusPoint({0.25, 0.5}), 0.0},
                                                                   {TorusPoint({0.75, 0.125}), 1.0}};
    const auto sol = solve_continuum_constrained(spec, labels, 2.0);
    const ConstraintSet c({{sol.nodes[0], 0.0}, {sol.nodes[1], 1.0}});
    const Eigen::VectorXd oracle = brute_force_oracle(fd_matrix(m), c, 2);
    double worst = 0.0;
    for (std::size_t i = 0; i < m * m; ++i) {
        worst = std::max(worst, std::abs(oracle(static_cast<Eigen::Index>(i)) - sol.u.values[i]));
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("one-dimensional grids") {
    const auto spec = continuum_spectrum(PeriodicGrid{64, 1}, SpectrumVariant::FiniteDifference);
    const auto sol = solve_continuum_constrained(spec, {{TorusPoint({0.25}), 0.0}, {TorusPoint({0.75}), 1.0}}, 1.0);
    // s = 1 in 1-d: the minimizer is piecewise linear between the constraints
    CHECK(sol.u.at(32) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(sol.u.at(24) == doctest::Approx(0.25).epsilon(1e-10));
}

TEST_CASE("interpolation") {
    const PeriodicGrid grid{8, 2};
    GridFunction fn{grid, std::vector<double>(64)};
    testing::Gen gen(51);
    for (auto& v : fn.values) {
        v = gen.uniform(-1.0, 1.0);
    }
    std::vector<double> nodes;
    for (std::size_t p = 0; p < 8; ++p) {
        for (std::size_t q = 0; q < 8; ++q) {
            nodes.push_back(static_cast<double>(p) / 8.0);
            nodes.push_back(static_cast<double>(q) / 8.0);
        }
    }
    const SampleSet at_nodes(2, nodes);
    for (auto scheme : {Interpolation::Bilinear, Interpolation::Bicubic}) {
        const auto vals = interpolate(fn, at_nodes, scheme);
        for (std::size_t i = 0; i < 64; ++i) {
            REQUIRE(vals[i] == fn.values[i]);
        }
    }

    const auto mid = interpolate(fn, SampleSet(2, {2.5 / 8.0, 7.5 / 8.0}), Interpolation::Bilinear);
    const double avg = (fn.at(2, 7) + fn.at(3, 7) + fn.at(2, 0) + fn.at(3, 0)) / 4.0;
    CHECK(mid[0] == doctest::Approx(avg).epsilon(1e-14));

    // periodic sawtooth p/8 in x1; linear inside [0, 7/8]
    GridFunction saw{grid, std::vector<double>(64)};
    for (std::size_t p = 0; p < 8; ++p) {
        for (std::size_t q = 0; q < 8; ++q) {
            saw.values[p * 8 + q] = static_cast<double>(p) / 8.0;
        }
    }
    const auto lin = interpolate(saw, SampleSet(2, {0.3, 0.41, 0.61, 0.77}), Interpolation::Bilinear);
    CHECK(lin[0] == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(lin[1] == doctest::Approx(0.61).epsilon(1e-14));

    // Catmull-Rom reproduces linear data away from the wrap
    const auto cub = interpolate(saw, SampleSet(2, {0.33, 0.2}), Interpolation::Bicubic);
    CHECK(cub[0] == doctest::Approx(0.33).epsilon(1e-13));

    // smooth data: bicubic beats bilinear
    const PeriodicGrid fine{32, 2};
    GridFunction wave{fine, std::vector<double>(32 * 32)};
    for (std::size_t p = 0; p < 32; ++p) {
        for (std::size_t q = 0; q < 32; ++q) {
            wave.values[p * 32 + q] = std::sin(2.0 * kPi * p / 32.0) * std::cos(2.0 * kPi * q / 32.0);
        }
    }
    const auto queries = gen.points(200, 2);
    const auto bl = interpolate(wave, queries, Interpolation::Bilinear);
    const auto bc = interpolate(wave, queries, Interpolation::Bicubic);
    double err_bl = 0.0;
    double err_bc = 0.0;
    for (std::size_t i = 0; i < queries.size(); ++i) {
        const double exact = std::sin(2.0 * kPi * queries.point(i)[0]) * std::cos(2.0 * kPi * queries.point(i)[1]);
        err_bl = std::max(err_bl, std::abs(bl[i] - exact));
        err_bc = std::max(err_bc, std::abs(bc[i] - exact));
    }
    CHECK(err_bc < err_bl);
    CHECK(err_bc < 2e-3);
}

TEST_CASE("l2_mu_n_error") {
    CHECK(l2_mu_n_error(Eigen::Vector2d(0.3, 0.7), Eigen::Vector2d(0.3, 0.7)) == 0.0);
    CHECK(l2_mu_n_error(Eigen::Vector3d(1, 2, 3), Eigen::Vector3d(1.5, 2.5, 3.5)) == doctest::Approx(0.5));
    CHECK(l2_mu_n_error(Eigen::Vector2d(0, 1), Eigen::Vector2d(0.5, 0.5)) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK_THROWS_AS(l2_mu_n_error(Eigen::Vector2d(0, 1), Eigen::Vector3d(0, 0, 0)), InvalidArgument);
}
