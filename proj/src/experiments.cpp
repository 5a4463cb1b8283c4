#include "fraclap/experiments.hpp"

#include "fraclap/error.hpp"
#include "fraclap/log.hpp"
#include "fraclap/parallel.hpp"
#include "fraclap/rng.hpp"
#include "fraclap/spectral.hpp"
#include "fraclap/ssl.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <string>
#include <tuple>

namespace fraclap {

void SweepConfig::validate() const {
    if (n_values.empty()) {
        throw InvalidArgument("sweep: n_values is empty");
    }
    if (!(s > 0.0) || !std::isfinite(s)) {
        throw InvalidArgument("sweep: s must be positive");
    }
    if (reps == 0) {
        throw InvalidArgument("sweep: reps must be at least 1");
    }
    if (labels.empty()) {
        throw InvalidArgument("sweep: at least one labeled point is required");
    }
    const std::size_t d = labels.front().point.dim();
    for (const auto& l : labels) {
        if (l.point.dim() != d) {
            throw InvalidArgument("sweep: labeled points have mixed dimensions");
        }
        if (!std::isfinite(l.label)) {
            throw InvalidArgument("sweep: non-finite label");
        }
    }
    if (d != 1 && d != 2) {
        throw InvalidArgument("sweep: the continuum reference supports d = 1 or 2 only");
    }
    for (std::size_t n : n_values) {
        if (n <= labels.size()) {
            throw InvalidArgument("sweep: n = " + std::to_string(n) +
                                  " leaves no unlabeled nodes");
        }
    }
    if (grid_m < 2) {
        throw InvalidArgument("sweep: grid_m must be at least 2");
    }
    if (!eps.values.empty()) {
        for (double e : eps.values) {
            if (!(e > 0.0) || !std::isfinite(e)) {
                throw InvalidArgument("sweep: eps values must be positive");
            }
        }
    } else {
        if (eps.count < 2) {
            throw InvalidArgument("sweep: eps count must be at least 2");
        }
        if (!(eps.lo_factor > 0.0) || !(eps.hi_factor > 0.0)) {
            throw InvalidArgument("sweep: eps factors must be positive");
        }
    }
}

std::uint64_t sweep_seed(std::uint64_t base_seed, std::size_t n, std::size_t rep) {
    return derive_seed(base_seed, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(rep)});
}

SampleSet sweep_sample(const SweepConfig& cfg, std::size_t n, std::uint64_t seed) {
    std::vector<TorusPoint> fixed;
    fixed.reserve(cfg.labels.size());
    for (const auto& l : cfg.labels) {
        fixed.push_back(l.point);
    }
    const SampleSet head = SampleSet::from_points(fixed);
    return SampleSet::concat(head, sample_uniform(n - cfg.labels.size(), head.dim(), seed));
}

namespace {

std::vector<double> geometric_grid(double lo, double hi, std::size_t count) {
    std::vector<double> out(count);
    const double ratio = std::log(hi / lo);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = lo * std::exp(ratio * static_cast<double>(i) / static_cast<double>(count - 1));
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

std::vector<double> eps_grid_from_radii(const SweepConfig& cfg, std::size_t n,
                                        const std::vector<double>& radii) {
    if (!cfg.eps.values.empty()) {
        std::vector<double> values = cfg.eps.values;
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        return values;
    }
    const double mean_radius =
        std::accumulate(radii.begin(), radii.end(), 0.0) / static_cast<double>(radii.size());
    const double lo = cfg.eps.lo_factor * mean_radius;
    const double hi = cfg.eps.hi_factor * std::pow(static_cast<double>(n), -1.0 / (2.0 * cfg.s));
    if (!(lo < hi)) {
        throw InvalidArgument("sweep: empty eps range at n = " + std::to_string(n) + " (" +
                              std::to_string(lo) + " >= " + std::to_string(hi) + ")");
    }
    return geometric_grid(lo, hi, cfg.eps.count);
}

}  // namespace

std::vector<double> sweep_eps_grid(const SweepConfig& cfg, std::size_t n) {
    cfg.validate();
    std::vector<double> radii;
    if (cfg.eps.values.empty()) {
        for (std::size_t rep = 0; rep < cfg.reps; ++rep) {
            radii.push_back(connectivity_radius(
                sweep_sample(cfg, n, sweep_seed(cfg.base_seed, n, rep)), Kernel::indicator()));
        }
    }
    return eps_grid_from_radii(cfg, n, radii);
}

void sort_records(std::vector<SweepRecord>& records) {
    std::stable_sort(records.begin(), records.end(), [](const SweepRecord& a, const SweepRecord& b) {
        return std::tie(a.n, a.eps, a.rep, a.seed) < std::tie(b.n, b.eps, b.rep, b.seed);
    });
}

std::vector<SweepRecord> run_sweep(const SweepConfig& cfg) {
    cfg.validate();
    const std::size_t d = cfg.labels.front().point.dim();
    const Kernel kernel = Kernel::indicator();

    std::vector<std::pair<TorusPoint, double>> targets;
    std::vector<Constraint> constraint_list;
    for (std::size_t i = 0; i < cfg.labels.size(); ++i) {
        targets.emplace_back(cfg.labels[i].point, cfg.labels[i].label);
        constraint_list.push_back({i, cfg.labels[i].label});
    }
    const ConstraintSet constraints(constraint_list);
    const ContinuumSpectrum cont_spec =
        continuum_spectrum(PeriodicGrid{cfg.grid_m, d}, SpectrumVariant::FiniteDifference);
    const ContinuumSolution reference = solve_continuum_constrained(cont_spec, targets, cfg.s);

    struct Instance {
        std::size_t n;
        std::size_t rep;
        std::uint64_t seed;
        SampleSet points;
        Eigen::VectorXd reference_values;
    };
    struct Job {
        std::size_t instance;
        double eps;
    };
    std::vector<Instance> instances;
    std::vector<Job> jobs;
    for (std::size_t n : cfg.n_values) {
        std::vector<double> radii;
        const std::size_t first = instances.size();
        for (std::size_t rep = 0; rep < cfg.reps; ++rep) {
            const std::uint64_t seed = sweep_seed(cfg.base_seed, n, rep);
            SampleSet pts = sweep_sample(cfg, n, seed);
            const auto values = interpolate(reference.u, pts, cfg.interpolation);
            if (cfg.eps.values.empty()) {
                radii.push_back(connectivity_radius(pts, kernel));
            }
            instances.push_back({n, rep, seed, std::move(pts),
                                 Eigen::Map<const Eigen::VectorXd>(values.data(),
                                                                   static_cast<Eigen::Index>(values.size()))});
        }
        const auto grid = eps_grid_from_radii(cfg, n, radii);
        for (std::size_t r = 0; r < cfg.reps; ++r) {
            for (double eps : grid) {
                jobs.push_back({first + r, eps});
            }
        }
    }

    std::vector<SweepRecord> records(jobs.size());
    parallel_for(jobs.size(), [&](std::size_t j) {
        const Instance& inst = instances[jobs[j].instance];
        SweepRecord rec;
        rec.n = inst.n;
        rec.eps = jobs[j].eps;
        rec.rep = inst.rep;
        rec.seed = inst.seed;
        const WeightedGraph g = build_weight_matrix(inst.points, rec.eps, kernel);
        rec.connected = is_connected(g);
        if (rec.connected) {
            try {
                const SpectralDecomposition spec = eigendecompose(graph_laplacian(g));
                const LabelFunction u = solve_constrained(spec, constraints, cfg.s);
                rec.err = l2_mu_n_error(u.values, inst.reference_values);
                rec.energy = u.energy;
            } catch (const NumericalError& e) {
                log::warning("sweep: n=" + std::to_string(rec.n) + " rep=" + std::to_string(rec.rep) +
                             " eps=" + std::to_string(rec.eps) + ": " + e.what());
            }
        }
        records[j] = rec;
    });
    sort_records(records);
    return records;
}

std::vector<double> smooth_curve(std::span<const double> xs, std::span<const double> ys,
                                 double bandwidth) {
    if (xs.size() != ys.size()) {
        throw InvalidArgument("smooth_curve: xs and ys differ in length");
    }
    if (xs.size() < 5) {
        throw InvalidArgument("smooth_curve: need at least 5 points");
    }
    if (!(bandwidth > 0.0)) {
        throw InvalidArgument("smooth_curve: bandwidth must be positive");
    }
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (!(xs[i] > xs[i - 1])) {
            throw InvalidArgument("smooth_curve: xs must be strictly increasing");
        }
    }
    std::vector<double> out(xs.size());
    for (std::size_t j = 0; j < xs.size(); ++j) {
        double num = 0.0;
        double den = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double z = (xs[i] - xs[j]) / bandwidth;
            const double w = std::exp(-0.5 * z * z);
            num += w * ys[i];
            den += w;
        }
        out[j] = num / den;
    }
    return out;
}

double median_spacing(std::span<const double> xs) {
    if (xs.size() < 2) {
        throw InvalidArgument("median_spacing: need at least 2 points");
    }
    std::vector<double> gaps;
    for (std::size_t i = 1; i < xs.size(); ++i) {
        gaps.push_back(xs[i] - xs[i - 1]);
    }
    std::sort(gaps.begin(), gaps.end());
    const std::size_t mid = gaps.size() / 2;
    return gaps.size() % 2 == 1 ? gaps[mid] : 0.5 * (gaps[mid - 1] + gaps[mid]);
}

double default_bandwidth(std::span<const double> xs) { return 3.0 * median_spacing(xs); }

TransitionPoint detect_transition(std::span<const double> xs, std::span<const double> smoothed) {
    const std::size_t n = xs.size();
    if (smoothed.size() != n) {
        throw InvalidArgument("detect_transition: xs and values differ in length");
    }
    if (n < 7) {
        throw InvalidArgument("detect_transition: need at least 7 points");
    }
    for (std::size_t i = 1; i < n; ++i) {
        if (!(xs[i] > xs[i - 1])) {
            throw InvalidArgument("detect_transition: xs must be strictly increasing");
        }
    }
    std::vector<double> first(n);
    std::vector<double> second(n);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double left = (smoothed[i] - smoothed[i - 1]) / (xs[i] - xs[i - 1]);
        const double right = (smoothed[i + 1] - smoothed[i]) / (xs[i + 1] - xs[i]);
        first[i] = (smoothed[i + 1] - smoothed[i - 1]) / (xs[i + 1] - xs[i - 1]);
        second[i] = 2.0 * (right - left) / (xs[i + 1] - xs[i - 1]);
    }
    first[0] = (smoothed[1] - smoothed[0]) / (xs[1] - xs[0]);
    first[n - 1] = (smoothed[n - 1] - smoothed[n - 2]) / (xs[n - 1] - xs[n - 2]);
    second[0] = second[1];
    second[n - 1] = second[n - 2];

    const auto argmin = static_cast<std::size_t>(
        std::distance(smoothed.begin(), std::min_element(smoothed.begin(), smoothed.end())));
    const std::size_t lo = std::max<std::size_t>(argmin + 1, 1);
    const std::size_t hi = n - 1;  // exclusive; the right boundary is never a candidate
    if (lo >= hi) {
        throw NumericalError("detect_transition: no ill-posed shoulder in range");
    }
    std::size_t best_first = lo;
    std::size_t best_second = lo;
    for (std::size_t i = lo; i < hi; ++i) {
        if (first[i] > first[best_first]) {
            best_first = i;
        }
        if (second[i] < second[best_second]) {
            best_second = i;
        }
    }
    return {std::exp(xs[argmin]), std::exp(xs[best_first]), std::exp(xs[best_second])};
}

LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) {
        throw InvalidArgument("linear_fit: length mismatch");
    }
    if (xs.size() < 2) {
        throw InvalidArgument("linear_fit: need at least 2 points");
    }
    const double count = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / count;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / count;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (!(sxx > 1e-300)) {
        throw InvalidArgument("linear_fit: degenerate design (all x equal)");
    }
    const double slope = sxy / sxx;
    return {my - slope * mx, slope};
}

PowerLawFit loglog_fit(std::span<const double> ns, std::span<const double> eps_values) {
    if (ns.size() != eps_values.size()) {
        throw InvalidArgument("loglog_fit: length mismatch");
    }
    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        if (!(ns[i] > 0.0) || !(eps_values[i] > 0.0)) {
            throw InvalidArgument("loglog_fit: values must be positive");
        }
        lx.push_back(std::log(ns[i]));
        ly.push_back(std::log(eps_values[i]));
    }
    const LinearFit fit = linear_fit(lx, ly);
    return {std::exp(fit.intercept), -fit.slope};
}

TransitionStudy transition_curves(const std::vector<SweepRecord>& input, const TransitionOptions& options) {
    std::vector<SweepRecord> records = input;
    sort_records(records);

    TransitionStudy study;
    std::size_t i = 0;
    while (i < records.size()) {
        ErrorCurve curve;
        curve.n = records[i].n;
        std::size_t excluded = 0;
        while (i < records.size() && records[i].n == curve.n) {
            const double eps = records[i].eps;
            double sum = 0.0;
            std::size_t count = 0;
            while (i < records.size() && records[i].n == curve.n && records[i].eps == eps) {
                if (records[i].connected && records[i].err) {
                    sum += *records[i].err;
                    ++count;
                } else {
                    ++excluded;
                }
                ++i;
            }
            if (count > 0) {
                curve.eps.push_back(eps);
                curve.mean_err.push_back(sum / static_cast<double>(count));
                curve.count.push_back(count);
            }
        }
        if (excluded > 0) {
            log::info("transitions: n=" + std::to_string(curve.n) + ": " + std::to_string(excluded) +
                      " disconnected or failed records excluded from the averages");
        }

        const std::string tag = "transitions: n=" + std::to_string(curve.n) + ": ";
        if (curve.eps.size() < 7) {
            log::warning(tag + "only " + std::to_string(curve.eps.size()) +
                         " eps values with connected graphs; excluded");
            study.curves.push_back(std::move(curve));
            continue;
        }
        std::vector<double> xs(curve.eps.size());
        std::transform(curve.eps.begin(), curve.eps.end(), xs.begin(), [](double e) { return std::log(e); });
        const double bandwidth = options.bandwidth_factor * median_spacing(xs);
        curve.smoothed = smooth_curve(xs, curve.mean_err, bandwidth);
        try {
            const TransitionPoint tp = detect_transition(xs, curve.smoothed);
            study.transitions.push_back({curve.n, tp.eps_argmin, tp.eps_hat, tp.eps_star});
        } catch (const NumericalError& e) {
            log::warning(tag + e.what() + "; excluded from the fit");
        }
        study.curves.push_back(std::move(curve));
    }
    return study;
}

TransitionStudy analyze_transitions(const std::vector<SweepRecord>& records, const TransitionOptions& options) {
    TransitionStudy study = transition_curves(records, options);
    fit_transitions(study, options);
    return study;
}

void fit_transitions(TransitionStudy& study, const TransitionOptions& options) {
    study.fit_ns.clear();
    if (study.transitions.size() < 2) {
        throw NumericalError("transitions: fewer than 2 usable n values for the fit");
    }
    std::size_t window = options.fit_window;
    if (study.transitions.size() < window) {
        log::warning("transitions: only " + std::to_string(study.transitions.size()) +
                     " usable n values; fitting over all of them");
        window = study.transitions.size();
    }
    std::vector<double> ns;
    std::vector<double> hats;
    std::vector<double> stars;
    for (std::size_t k = study.transitions.size() - window; k < study.transitions.size(); ++k) {
        const auto& t = study.transitions[k];
        study.fit_ns.push_back(t.n);
        ns.push_back(static_cast<double>(t.n));
        hats.push_back(t.eps_hat);
        stars.push_back(t.eps_star);
    }
    study.eps_hat_fit = loglog_fit(ns, hats);
    study.eps_star_fit = loglog_fit(ns, stars);
}

TransitionStudy transition_study(const SweepConfig& cfg, const TransitionOptions& options) {
    return analyze_transitions(run_sweep(cfg), options);
}

std::array<std::size_t, 4> regime_thresholds(double eps, double alpha, std::size_t d, std::size_t n) {
    if (!(eps > 0.0) || !(alpha > 0.0) || d == 0 || n == 0) {
        throw InvalidArgument("regime_thresholds: eps, alpha, d and n must be positive");
    }
    const double dd = static_cast<double>(d);
    auto clamp = [n](double k) {
        // Guard against k = 40 arriving as 39.999999999.
        const double floored = std::floor(k * (1.0 + 1e-12));
        if (!(floored < static_cast<double>(n))) {
            return n;
        }
        return std::max<std::size_t>(1, static_cast<std::size_t>(floored));
    };
    return {clamp(alpha * std::pow(eps, -dd / 4.0)), clamp(alpha * std::pow(eps, -dd / 2.0)),
            clamp(alpha * std::pow(eps, -dd)), n};
}

std::size_t k_star(std::span<const double> values, std::size_t limit) {
    if (limit == 0 || limit > values.size()) {
        throw InvalidArgument("k_star: limit must be in [1, " + std::to_string(values.size()) + "]");
    }
    const auto first = values.begin();
    return static_cast<std::size_t>(std::distance(first, std::max_element(first, first + static_cast<std::ptrdiff_t>(limit)))) + 1;
}

std::vector<double> analytic_eigenvalues(std::size_t d, std::size_t count) {
    if (d == 0 || d > 3) {
        throw InvalidArgument("analytic_eigenvalues: d must be 1, 2 or 3");
    }
    if (count == 0) {
        return {};
    }
    // Grow the radius until the ball |k| <= radius holds enough lattice points;
    // the box [-radius, radius]^d contains the whole ball.
    long radius = 1;
    std::vector<long> squares;
    while (true) {
        squares.clear();
        const long r2 = radius * radius;
        std::vector<long> k(d, -radius);
        while (true) {
            long sq = 0;
            for (long c : k) {
                sq += c * c;
            }
            if (sq <= r2) {
                squares.push_back(sq);
            }
            std::size_t axis = 0;
            while (axis < d && k[axis] == radius) {
                k[axis] = -radius;
                ++axis;
            }
            if (axis == d) {
                break;
            }
            ++k[axis];
        }
        if (squares.size() >= count) {
            break;
        }
        radius *= 2;
    }
    std::sort(squares.begin(), squares.end());
    std::vector<double> out(count);
    const double four_pi2 = 4.0 * std::numbers::pi * std::numbers::pi;
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = four_pi2 * static_cast<double>(squares[i]);
    }
    return out;
}

EigenGrowthResult eigen_growth_experiment(const EigenGrowthConfig& cfg) {
    if (cfg.n_values.empty()) {
        throw InvalidArgument("eigens: n_values is empty");
    }
    for (std::size_t n : cfg.n_values) {
        if (n < 2) {
            throw InvalidArgument("eigens: every n must be at least 2");
        }
    }
    if (cfg.reps == 0 || !(cfg.alpha > 0.0) || cfg.d == 0 || cfg.fit_window < 2) {
        throw InvalidArgument("eigens: reps >= 1, alpha > 0, d >= 1 and fit_window >= 2 are required");
    }
    const std::size_t max_n = *std::max_element(cfg.n_values.begin(), cfg.n_values.end());
    const std::vector<double> continuum = analytic_eigenvalues(cfg.d, max_n);
    const Kernel kernel = Kernel::indicator();

    struct Job {
        std::size_t n;
        std::size_t rep;
    };
    std::vector<Job> jobs;
    for (std::size_t n : cfg.n_values) {
        for (std::size_t rep = 0; rep < cfg.reps; ++rep) {
            jobs.push_back({n, rep});
        }
    }
    struct Outcome {
        std::array<EigenGrowthRow, 4> rows;
        std::array<bool, 4> clamped{};
    };
    std::vector<Outcome> outcomes(jobs.size());
    parallel_for(jobs.size(), [&](std::size_t j) {
        const auto [n, rep] = jobs[j];
        const SampleSet pts = sample_uniform(n, cfg.d, sweep_seed(cfg.base_seed, n, rep));
        const double eps = connectivity_radius(pts, kernel);
        const WeightedGraph g = build_weight_matrix(pts, eps, kernel);
        const SpectralDecomposition spec = eigendecompose(graph_laplacian(g));
        std::vector<double> sup_norms(n);
        for (std::size_t k = 0; k < n; ++k) {
            sup_norms[k] = spec.eigenvectors.col(static_cast<Eigen::Index>(k)).cwiseAbs().maxCoeff();
        }
        const auto limits = regime_thresholds(eps, cfg.alpha, cfg.d, n);
        const double dd = static_cast<double>(cfg.d);
        const std::array<double, 3> raw = {cfg.alpha * std::pow(eps, -dd / 4.0),
                                           cfg.alpha * std::pow(eps, -dd / 2.0),
                                           cfg.alpha * std::pow(eps, -dd)};
        Outcome& out = outcomes[j];
        for (int r = 0; r < 4; ++r) {
            const auto ri = static_cast<std::size_t>(r);
            const std::size_t ks = k_star(sup_norms, limits[ri]);
            out.rows[ri] = {n,
                            rep,
                            eps,
                            r + 1,
                            limits[ri],
                            ks,
                            continuum[ks - 1],
                            spec.eigenvalues(static_cast<Eigen::Index>(ks - 1)),
                            sup_norms[ks - 1]};
            out.clamped[ri] = r < 3 && raw[ri] > static_cast<double>(n);
        }
    });

    EigenGrowthResult result;
    std::map<std::pair<std::size_t, int>, std::size_t> clamp_counts;
    for (const auto& out : outcomes) {
        for (std::size_t r = 0; r < 4; ++r) {
            result.rows.push_back(out.rows[r]);
            if (out.clamped[r]) {
                ++clamp_counts[{out.rows[r].n, out.rows[r].regime}];
            }
        }
    }
    for (const auto& [key, count] : clamp_counts) {
        log::warning("eigens: n=" + std::to_string(key.first) + ": k^(" + std::to_string(key.second) +
                     ") exceeds n in " + std::to_string(count) + " reps; clamped to n");
    }
    std::stable_sort(result.rows.begin(), result.rows.end(), [](const auto& a, const auto& b) {
        return std::tie(a.n, a.rep, a.regime) < std::tie(b.n, b.rep, b.regime);
    });
    result.fits = fit_eigen_growth(result.rows, cfg.fit_window, &result.fit_ns);
    return result;
}

std::vector<RegimeFit> fit_eigen_growth(const std::vector<EigenGrowthRow>& rows, std::size_t fit_window,
                                        std::vector<std::size_t>* fit_ns) {
    // (regime, n) -> sums of log lambda, log psi and count
    struct Acc {
        double log_lambda = 0.0;
        double log_psi = 0.0;
        std::size_t count = 0;
    };
    std::map<int, std::map<std::size_t, Acc>> acc;
    std::size_t skipped = 0;
    for (const auto& row : rows) {
        if (!(row.lambda_kstar > 0.0) || !(row.psi_inf_norm > 0.0)) {
            ++skipped;
            continue;
        }
        Acc& a = acc[row.regime][row.n];
        a.log_lambda += std::log(row.lambda_kstar);
        a.log_psi += std::log(row.psi_inf_norm);
        ++a.count;
    }
    if (skipped > 0) {
        log::warning("eigens: " + std::to_string(skipped) +
                     " rows with k_star = 1 (zero eigenvalue) left out of the fits");
    }
    std::vector<RegimeFit> fits;
    for (const auto& [regime, by_n] : acc) {
        std::vector<double> xs;
        std::vector<double> ys;
        std::vector<std::size_t> ns;
        for (const auto& [n, a] : by_n) {
            ns.push_back(n);
            xs.push_back(a.log_lambda / static_cast<double>(a.count));
            ys.push_back(a.log_psi / static_cast<double>(a.count));
        }
        std::size_t window = fit_window;
        if (ns.size() < window) {
            log::warning("eigens: regime " + std::to_string(regime) + ": only " +
                         std::to_string(ns.size()) + " n values; fitting over all of them");
            window = ns.size();
        }
        const std::size_t start = ns.size() - window;
        std::vector<double> fx(xs.begin() + static_cast<std::ptrdiff_t>(start), xs.end());
        std::vector<double> fy(ys.begin() + static_cast<std::ptrdiff_t>(start), ys.end());
        if (fx.size() < 2) {
            log::warning("eigens: regime " + std::to_string(regime) + ": fewer than 2 points; no fit");
            continue;
        }
        try {
            fits.push_back({regime, linear_fit(fx, fy), fx.size()});
        } catch (const InvalidArgument& e) {
            log::warning("eigens: regime " + std::to_string(regime) + ": " + e.what());
            continue;
        }
        if (fit_ns != nullptr && fit_ns->empty()) {
            fit_ns->assign(ns.begin() + static_cast<std::ptrdiff_t>(start), ns.end());
        }
    }
    return fits;
}

}  // namespace fraclap
