#include "fraclap/error.hpp"
#include "fraclap/experiments.hpp"
#include "fraclap/ssl.hpp"

#include "../support/generators.hpp"

#include <doctest.h>

#include <numbers>

using namespace fraclap;

namespace {

std::vector<LabeledPoint> diagonal_labels() {
    return {{TorusPoint({0.1, 0.1}), 0.0}, {TorusPoint({0.9, 0.9}), 1.0}};
}

double logistic(double t) { return 1.0 / (1.0 + std::exp(-t)); }

std::vector<double> uniform_grid(double lo, double hi, std::size_t count) {
    std::vector<double> xs(count);
    for (std::size_t i = 0; i < count; ++i) {
        xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    return xs;
}

/// Records whose error is a logistic ramp in log eps centred on 0.7 / n^0.05.
std::vector<SweepRecord> logistic_records(const std::vector<std::size_t>& ns, std::size_t reps) {
    std::vector<SweepRecord> records;
    for (std::size_t n : ns) {
        const double centre = std::log(0.7 / std::pow(static_cast<double>(n), 0.05));
        for (double x : uniform_grid(-4.0, 1.5, 1100)) {
            for (std::size_t rep = 0; rep < reps; ++rep) {
                SweepRecord r;
                r.n = n;
                r.eps = std::exp(x);
                r.rep = rep;
                r.connected = true;
                r.err = 0.1 + 0.4 * logistic((x - centre) / 0.15);
                r.energy = 1.0;
                records.push_back(r);
            }
        }
    }
    return records;
}

}  // namespace

TEST_CASE("smooth_curve") {
    const auto xs = uniform_grid(0.0, 1.0, 200);
    const std::vector<double> flat(200, 0.42);
    for (double v : smooth_curve(xs, flat, 0.05)) {
        REQUIRE(v == doctest::Approx(0.42).epsilon(1e-15));
    }

    testing::Gen gen(71);
    std::vector<double> noisy(200);
    for (auto& v : noisy) {
        v = gen.uniform();
    }
    const double spacing = median_spacing(xs);
    CHECK(spacing == doctest::Approx(1.0 / 199.0).epsilon(1e-12));
    CHECK(default_bandwidth(xs) == doctest::Approx(3.0 * spacing).epsilon(1e-12));
    const auto sharp = smooth_curve(xs, noisy, 1e-4 * spacing);
    for (std::size_t i = 0; i < 200; ++i) {
        REQUIRE(std::abs(sharp[i] - noisy[i]) <= 1e-6);
    }

    std::vector<double> line(200);
    for (std::size_t i = 0; i < 200; ++i) {
        line[i] = 2.5 * xs[i] - 0.75;
    }
    const auto smoothed = smooth_curve(xs, line, 2.0 * spacing);
    for (std::size_t i = 20; i + 20 < 200; ++i) {
        REQUIRE(std::abs(smoothed[i] - line[i]) <= 1e-8);
    }

    CHECK_THROWS_AS(smooth_curve(std::vector<double>{0, 1, 2, 3}, std::vector<double>{0, 1, 2, 3}, 1.0),
                    InvalidArgument);
    CHECK_THROWS_AS(smooth_curve(std::vector<double>{0, 1, 1, 3, 4}, std::vector<double>{0, 1, 2, 3, 4}, 1.0),
                    InvalidArgument);
    CHECK_THROWS_AS(smooth_curve(xs, flat, 0.0), InvalidArgument);
}

TEST_CASE("detect_transition on a logistic ramp") {
    const double x0 = std::log(0.5);
    const double w = 0.2;
    const auto xs = uniform_grid(-3.0, 1.0, 801);
    const double step = xs[1] - xs[0];
    std::vector<double> ys(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        ys[i] = logistic((xs[i] - x0) / w);
    }
    const auto tp = detect_transition(xs, ys);
    CHECK(std::abs(std::log(tp.eps_hat) - x0) <= step);
    // the second derivative of the logistic is most negative at x0 + w ln(2 + sqrt 3)
    const double star = x0 + w * std::log(2.0 + std::sqrt(3.0));
    CHECK(std::abs(std::log(tp.eps_star) - star) <= 2.0 * step);
    CHECK(tp.eps_argmin <= tp.eps_hat);
    CHECK(tp.eps_argmin <= tp.eps_star);

    // a dip before the ramp moves the search window past the dip
    std::vector<double> dipped = ys;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        dipped[i] += 2.0 * std::exp(-std::pow((xs[i] + 3.0) / 0.3, 2));
    }
    const auto tp2 = detect_transition(xs, dipped);
    CHECK(std::abs(std::log(tp2.eps_hat) - x0) <= step);

    std::vector<double> falling(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        falling[i] = -xs[i];
    }
    try {
        detect_transition(xs, falling);
        FAIL("expected an error");
    } catch (const NumericalError& e) {
        CHECK(std::string(e.what()).find("no ill-posed shoulder in range") != std::string::npos);
    }
    CHECK_THROWS_AS(detect_transition(std::vector<double>{0, 1, 2, 3, 4, 5}, std::vector<double>{0, 1, 2, 3, 4, 5}),
                    InvalidArgument);
}

TEST_CASE("log-log fits") {
    std::vector<double> ns;
    std::vector<double> eps;
    for (int n = 100; n <= 1000; n += 100) {
        ns.push_back(n);
        eps.push_back(0.5 / std::pow(n, 0.1));
    }
    const auto fit = loglog_fit(ns, eps);
    CHECK(std::abs(fit.coefficient - 0.5) <= 1e-10);
    CHECK(std::abs(fit.exponent - 0.1) <= 1e-10);

    const auto two = loglog_fit(std::vector<double>{10, 1000}, std::vector<double>{2.0, 0.02});
    CHECK(two.exponent == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(two.coefficient == doctest::Approx(20.0).epsilon(1e-13));

    const auto line = linear_fit(std::vector<double>{0, 1, 2}, std::vector<double>{1, 3, 5});
    CHECK(line.intercept == doctest::Approx(1.0));
    CHECK(line.slope == doctest::Approx(2.0));

    try {
        loglog_fit(std::vector<double>{100, 100}, std::vector<double>{0.3, 0.4});
        FAIL("expected an error");
    } catch (const InvalidArgument& e) {
        CHECK(std::string(e.what()).find("degenerate design") != std::string::npos);
    }
    CHECK_THROWS(loglog_fit(std::vector<double>{100, 200}, std::vector<double>{0.3, -0.4}));
}

TEST_CASE("transition study on a synthetic logistic family") {
    const std::vector<std::size_t> ns = {100, 200, 400, 600, 800, 1000};
    const auto study = analyze_transitions(logistic_records(ns, 1));
    REQUIRE(study.transitions.size() == ns.size());
    CHECK(study.fit_ns == std::vector<std::size_t>{200, 400, 600, 800, 1000});
    CHECK(std::abs(study.eps_hat_fit.exponent - 0.05) <= 0.01);
    CHECK(std::abs(study.eps_hat_fit.coefficient - 0.7) <= 0.05);

    const auto triple = analyze_transitions(logistic_records(ns, 3));
    CHECK(triple.eps_hat_fit.exponent == doctest::Approx(study.eps_hat_fit.exponent).epsilon(1e-12));
    CHECK(triple.eps_star_fit.exponent == doctest::Approx(study.eps_star_fit.exponent).epsilon(1e-12));
    CHECK(triple.eps_star_fit.coefficient == doctest::Approx(study.eps_star_fit.coefficient).epsilon(1e-12));

    CHECK_THROWS_AS(analyze_transitions(logistic_records({100}, 1)), NumericalError);

    // fewer n than the window: fit over all of them
    const auto short_study = analyze_transitions(logistic_records({100, 1000}, 1));
    CHECK(short_study.fit_ns.size() == 2);

    // disconnected records do not enter the averages
    auto records = logistic_records({100, 1000}, 2);
    for (auto& r : records) {
        if (r.rep == 1) {
            r.connected = false;
            r.err.reset();
            r.energy.reset();
        }
    }
    const auto partial = analyze_transitions(records);
    CHECK(partial.eps_hat_fit.exponent == doctest::Approx(short_study.eps_hat_fit.exponent).epsilon(1e-12));
    CHECK(partial.curves.front().count.front() == 1);
}

TEST_CASE("sweep configuration and seeds") {
    SweepConfig cfg;
    cfg.n_values = {50};
    cfg.reps = 2;
    cfg.labels = diagonal_labels();
    CHECK_NOTHROW(cfg.validate());

    auto bad = cfg;
    bad.reps = 0;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    bad = cfg;
    bad.s = 0.0;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    bad = cfg;
    bad.eps.values = {0.2, -0.1};
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    bad = cfg;
    bad.labels.clear();
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    bad = cfg;
    bad.n_values = {2};
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);

    CHECK(sweep_seed(0, 100, 1) != sweep_seed(0, 100, 2));
    CHECK(sweep_seed(0, 100, 1) != sweep_seed(0, 200, 1));
    CHECK(sweep_seed(3, 100, 1) == sweep_seed(3, 100, 1));

    const auto pts = sweep_sample(cfg, 50, 9);
    REQUIRE(pts.size() == 50);
    CHECK(pts.point(0)[0] == 0.1);
    CHECK(pts.point(1)[1] == 0.9);

    const auto grid = sweep_eps_grid(cfg, 50);
    REQUIRE(grid.size() == 40);
    CHECK(grid.back() == doctest::Approx(3.0 * std::pow(50.0, -1.0 / 32.0)).epsilon(1e-12));
    for (std::size_t i = 1; i < grid.size(); ++i) {
        REQUIRE(grid[i] > grid[i - 1]);
    }
    double mean_radius = 0.0;
    for (std::size_t rep = 0; rep < 2; ++rep) {
        mean_radius += connectivity_radius(sweep_sample(cfg, 50, sweep_seed(0, 50, rep)), Kernel::indicator());
    }
    CHECK(grid.front() == doctest::Approx(1.05 * mean_radius / 2.0).epsilon(1e-12));
}

TEST_CASE("run_sweep is deterministic and records disconnection") {
    SweepConfig cfg;
    cfg.n_values = {50};
    cfg.reps = 2;
    cfg.labels = diagonal_labels();
    cfg.grid_m = 40;
    cfg.eps.values = {0.01, 0.3, 0.8};
    const auto a = run_sweep(cfg);
    const auto b = run_sweep(cfg);
    REQUIRE(a.size() == 6);
    for (std::size_t i = 0; i < a.size(); ++i) {
        REQUIRE(a[i].eps == b[i].eps);
        REQUIRE(a[i].seed == b[i].seed);
        REQUIRE(a[i].err == b[i].err);
        REQUIRE(a[i].energy == b[i].energy);
    }
    // sorted by (n, eps, rep)
    CHECK(a[0].eps == 0.01);
    CHECK(a[0].rep == 0);
    CHECK(a[1].rep == 1);
    CHECK_FALSE(a[0].connected);
    CHECK_FALSE(a[0].err.has_value());
    CHECK(a[2].connected);
    CHECK(*a[2].err >= 0.0);
}

TEST_CASE("complete graphs give a constant away from the labels") {
    // eps above sqrt(2)/2 links every pair with the same weight
    const auto pts = SampleSet::concat(SampleSet(2, {0.1, 0.1, 0.9, 0.9}), sample_uniform(28, 2, 4));
    const auto g = build_weight_matrix(pts, 0.75, Kernel::indicator());
    const auto spec = eigendecompose(graph_laplacian(g));
    const auto u = solve_constrained(spec, ConstraintSet({{0, 0.0}, {1, 1.0}}), 16.0);
    const double ref = u.values(2);
    for (Eigen::Index i = 2; i < u.values.size(); ++i) {
        REQUIRE(std::abs(u.values(i) - ref) <= 1e-6);
    }
}

TEST_CASE("discrete Poincare ratio stays bounded across n") {
    SweepConfig cfg;
    cfg.labels = diagonal_labels();
    std::vector<double> ratios;
    for (std::size_t n : {100, 200, 400}) {
        const auto pts = sweep_sample(cfg, n, sweep_seed(0, n, 0));
        const double eps = 0.4;
        const auto g = build_weight_matrix(pts, eps, Kernel::indicator());
        REQUIRE(is_connected(g));
        const auto spec = eigendecompose(graph_laplacian(g));
        const auto u = solve_constrained(spec, ConstraintSet({{0, 0.0}, {1, 1.0}}), 16.0);
        const double mean = u.values.mean();
        ratios.push_back((u.values.array() - mean).abs().maxCoeff() / std::sqrt(u.energy));
        MESSAGE("n = " << n << ": max|u - mean| / sqrt(E) = " << ratios.back());
    }
    CHECK(ratios.back() <= 10.0 * ratios.front());
}

TEST_CASE("eps near connectivity beats the ill-posed scale" * doctest::test_suite("desk_scale")) {
    SweepConfig cfg;
    cfg.labels = diagonal_labels();
    cfg.grid_m = 100;
    const std::size_t n = 200;
    const auto pts = sweep_sample(cfg, n, sweep_seed(0, n, 0));
    const double radius = connectivity_radius(pts, Kernel::indicator());
    cfg.n_values = {n};
    cfg.eps.values = {1.5 * radius, 0.5};
    const auto records = run_sweep(cfg);
    REQUIRE(records.size() == 2);
    REQUIRE(records[0].err.has_value());
    REQUIRE(records[1].err.has_value());
    MESSAGE("err at 1.5 x radius (" << records[0].eps << ") = " << *records[0].err << ", at 0.5 = " << *records[1].err);
    CHECK(*records[0].err < *records[1].err);
}

TEST_CASE("eigen-growth thresholds and argmax") {
    const auto k = regime_thresholds(0.01, 4.0, 2, 1000);
    CHECK(k[0] == 40);
    CHECK(k[1] == 400);
    CHECK(k[2] == 1000);
    CHECK(k[3] == 1000);
    const auto big = regime_thresholds(0.01, 4.0, 2, 100000);
    CHECK(big[2] == 40000);

    testing::Gen gen(72);
    for (int t = 0; t < 200; ++t) {
        const double eps = gen.uniform(1e-3, 1.0);
        const auto r = regime_thresholds(eps, gen.uniform(0.5, 8.0), gen.index(1, 3), gen.index(1, 5000));
        REQUIRE(r[0] <= r[1]);
        REQUIRE(r[1] <= r[2]);
        REQUIRE(r[2] <= r[3]);
    }
    CHECK_THROWS_AS(regime_thresholds(0.0, 4.0, 2, 10), InvalidArgument);

    const std::vector<double> norms = {1.0, 3.0, 2.0};
    CHECK(k_star(norms, 3) == 2);
    CHECK(k_star(norms, 1) == 1);
    CHECK(k_star(std::vector<double>{2.0, 2.0}, 2) == 1);
    CHECK_THROWS_AS(k_star(norms, 4), InvalidArgument);
    CHECK_THROWS_AS(k_star(norms, 0), InvalidArgument);
}

TEST_CASE("analytic eigenvalues match lattice enumeration") {
    for (std::size_t d = 1; d <= 3; ++d) {
        std::vector<long> squares;
        const long r = d == 1 ? 300 : (d == 2 ? 30 : 10);
        for (long a = -r; a <= r; ++a) {
            for (long b = (d >= 2 ? -r : 0); b <= (d >= 2 ? r : 0); ++b) {
                for (long c = (d >= 3 ? -r : 0); c <= (d >= 3 ? r : 0); ++c) {
                    squares.push_back(a * a + b * b + c * c);
                }
            }
        }
        std::sort(squares.begin(), squares.end());
        const auto values = analytic_eigenvalues(d, 500);
        REQUIRE(values.size() == 500);
        for (std::size_t i = 0; i < 500; ++i) {
            REQUIRE(values[i] ==
                    doctest::Approx(4.0 * std::numbers::pi * std::numbers::pi * static_cast<double>(squares[i]))
                        .epsilon(1e-14));
        }
    }
    CHECK(analytic_eigenvalues(2, 0).empty());
    CHECK_THROWS_AS(analytic_eigenvalues(4, 3), InvalidArgument);
}

TEST_CASE("eigen-growth fits recover a planted power law") {
    std::vector<EigenGrowthRow> rows;
    const std::vector<std::size_t> ns = {100, 200, 300, 400, 500, 600, 700, 800};
    for (std::size_t n : ns) {
        for (std::size_t rep = 0; rep < 2; ++rep) {
            for (int regime = 1; regime <= 4; ++regime) {
                EigenGrowthRow row;
                row.n = n;
                row.rep = rep;
                row.regime = regime;
                row.k_star = 2 + n / 50 * static_cast<std::size_t>(regime);
                row.lambda_kstar = 10.0 * static_cast<double>(row.k_star) * (rep == 0 ? 1.1 : 0.9);
                row.psi_inf_norm = 3.0 * std::pow(row.lambda_kstar, -0.25 * regime);
                rows.push_back(row);
            }
        }
    }
    std::vector<std::size_t> fit_ns;
    const auto fits = fit_eigen_growth(rows, 7, &fit_ns);
    CHECK(fit_ns == std::vector<std::size_t>(ns.begin() + 1, ns.end()));
    REQUIRE(fits.size() == 4);
    for (const auto& f : fits) {
        CHECK(f.fit.slope == doctest::Approx(-0.25 * f.regime).epsilon(1e-10));
        CHECK(f.fit.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-10));
        CHECK(f.points == 7);
    }
}

TEST_CASE("eigen-growth experiment on small graphs") {
    EigenGrowthConfig cfg;
    cfg.n_values = {60, 80, 100};
    cfg.reps = 2;
    const auto result = eigen_growth_experiment(cfg);
    REQUIRE(result.rows.size() == 3 * 2 * 4);
    for (const auto& row : result.rows) {
        REQUIRE(row.k_star >= 1);
        REQUIRE(row.k_star <= row.k_limit);
        REQUIRE(row.k_limit <= row.n);
        REQUIRE(row.psi_inf_norm >= 1.0 - 1e-12);
        REQUIRE(row.eps_conn > 0.0);
        if (row.regime == 4) {
            REQUIRE(row.k_limit == row.n);
        }
    }
    CHECK(result.fits.size() == 4);

    // the constant eigenvector has unit sup norm
    const auto pts = sample_uniform(60, 2, 1);
    const auto g = build_weight_matrix(pts, connectivity_radius(pts, Kernel::indicator()), Kernel::indicator());
    const auto spec = eigendecompose(graph_laplacian(g));
    CHECK(spec.eigenvectors.col(0).cwiseAbs().maxCoeff() == 1.0);

    cfg.d = 1;
    CHECK_NOTHROW(eigen_growth_experiment(cfg));
    cfg.n_values = {};
    CHECK_THROWS_AS(eigen_growth_experiment(cfg), InvalidArgument);
}
