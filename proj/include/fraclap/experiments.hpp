#pragma once

#include "fraclap/continuum.hpp"
#include "fraclap/graph.hpp"
#include "fraclap/torus.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fraclap {

struct LabeledPoint {
    TorusPoint point;
    double label;
};

/// How the eps values of a sweep are chosen for each n.
///
/// With `values` non-empty they are used verbatim for every n. Otherwise the
/// grid is `count` geometrically spaced values from lo_factor times the mean
/// connectivity radius (over the reps at that n) to hi_factor * n^(-1/(2s)).
struct EpsRule {
    std::vector<double> values;
    double lo_factor = 1.05;
    double hi_factor = 3.0;
    std::size_t count = 40;
};

struct SweepConfig {
    std::vector<std::size_t> n_values;
    double s = 16.0;
    EpsRule eps;
    std::size_t reps = 1;
    std::uint64_t base_seed = 0;
    std::vector<LabeledPoint> labels;  // become nodes 0..N-1 of every graph
    std::size_t grid_m = 100;
    Interpolation interpolation = Interpolation::Bicubic;

    /// Throws InvalidArgument on an unusable configuration.
    void validate() const;
};

struct SweepRecord {
    std::size_t n = 0;
    double eps = 0.0;
    std::size_t rep = 0;
    std::uint64_t seed = 0;
    bool connected = false;
    std::optional<double> err;     // L2(mu_n) distance to the continuum solution
    std::optional<double> energy;  // E^(s) of the discrete minimizer
};

/// Seed of repetition `rep` at size `n`.
std::uint64_t sweep_seed(std::uint64_t base_seed, std::size_t n, std::size_t rep);

/// Labeled points followed by n - N uniform samples drawn from `seed`.
SampleSet sweep_sample(const SweepConfig& cfg, std::size_t n, std::uint64_t seed);

/// eps grid used for size n (see EpsRule).
std::vector<double> sweep_eps_grid(const SweepConfig& cfg, std::size_t n);

/// Runs every (n, rep, eps) job and returns records sorted by (n, eps, rep).
/// Disconnected graphs and per-job numerical failures become records without
/// err; the sweep itself never aborts on them.
std::vector<SweepRecord> run_sweep(const SweepConfig& cfg);

/// Sorts by (n, eps, rep).
void sort_records(std::vector<SweepRecord>& records);

/// Nadaraya-Watson smoother with a Gaussian kernel of the given bandwidth.
std::vector<double> smooth_curve(std::span<const double> xs, std::span<const double> ys,
                                 double bandwidth);

double median_spacing(std::span<const double> xs);

/// Three times the median spacing of xs.
double default_bandwidth(std::span<const double> xs);

struct TransitionPoint {
    double eps_argmin = 0.0;
    double eps_hat = 0.0;   // maximizer of the first derivative
    double eps_star = 0.0;  // minimizer of the second derivative
};

/// xs are log(eps) values, strictly increasing; results are in eps units.
/// Both searches only consider interior points to the right of the minimizer
/// of the smoothed error.
TransitionPoint detect_transition(std::span<const double> xs, std::span<const double> smoothed);

struct LinearFit {
    double intercept = 0.0;
    double slope = 0.0;
};

/// Ordinary least squares y = intercept + slope x.
LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys);

struct PowerLawFit {
    double coefficient = 0.0;  // c in eps = c / n^a
    double exponent = 0.0;     // a
};

PowerLawFit loglog_fit(std::span<const double> ns, std::span<const double> eps_values);

struct TransitionResult {
    std::size_t n = 0;
    double eps_argmin = 0.0;
    double eps_hat = 0.0;
    double eps_star = 0.0;
};

/// Rep-averaged error curve for one n.
struct ErrorCurve {
    std::size_t n = 0;
    std::vector<double> eps;
    std::vector<double> mean_err;
    std::vector<std::size_t> count;  // connected reps contributing to each mean
    std::vector<double> smoothed;    // empty if the curve was too short to smooth
};

struct TransitionOptions {
    double bandwidth_factor = 3.0;  // times the median log-eps spacing
    std::size_t fit_window = 5;     // largest n used in the fits
};

struct TransitionStudy {
    std::vector<ErrorCurve> curves;
    std::vector<TransitionResult> transitions;  // n where detection succeeded
    std::vector<std::size_t> fit_ns;
    PowerLawFit eps_hat_fit;
    PowerLawFit eps_star_fit;
};

/// Averages connected reps per (n, eps), smooths in log eps, detects the
/// transition per n and fits eps_hat and eps_star against n.
TransitionStudy analyze_transitions(const std::vector<SweepRecord>& records,
                                    const TransitionOptions& options = {});

/// The per-n part of analyze_transitions: curves and detected transitions,
/// with the fits left empty.
TransitionStudy transition_curves(const std::vector<SweepRecord>& records, const TransitionOptions& options = {});

/// Fills the power-law fits of a study over the largest fit_window n values.
void fit_transitions(TransitionStudy& study, const TransitionOptions& options = {});

/// run_sweep followed by analyze_transitions.
TransitionStudy transition_study(const SweepConfig& cfg, const TransitionOptions& options = {});

struct EigenGrowthConfig {
    std::vector<std::size_t> n_values;
    double alpha = 4.0;
    std::size_t reps = 1;
    std::uint64_t base_seed = 0;
    std::size_t d = 2;
    std::size_t fit_window = 7;  // largest n used in the per-regime fits
};

/// k^(1..4) = alpha eps^(-d/4), alpha eps^(-d/2), alpha eps^(-d), n, floored
/// and clamped to [1, n].
std::array<std::size_t, 4> regime_thresholds(double eps, double alpha, std::size_t d, std::size_t n);

/// 1-based argmax of values[0..limit), first index on ties.
std::size_t k_star(std::span<const double> values, std::size_t limit);

/// The `count` smallest eigenvalues 4 pi^2 |k|^2 over k in Z^d, ascending.
std::vector<double> analytic_eigenvalues(std::size_t d, std::size_t count);

struct EigenGrowthRow {
    std::size_t n = 0;
    std::size_t rep = 0;
    double eps_conn = 0.0;
    int regime = 0;  // 1..4
    std::size_t k_limit = 0;
    std::size_t k_star = 0;
    double lambda_kstar = 0.0;    // continuum eigenvalue at rank k_star
    double lambda_n_kstar = 0.0;  // graph eigenvalue at rank k_star
    double psi_inf_norm = 0.0;
};

struct RegimeFit {
    int regime = 0;
    LinearFit fit;  // log ||psi||_inf = intercept + slope log lambda
    std::size_t points = 0;
};

struct EigenGrowthResult {
    std::vector<EigenGrowthRow> rows;  // sorted by (n, rep, regime)
    std::vector<std::size_t> fit_ns;
    std::vector<RegimeFit> fits;
};

EigenGrowthResult eigen_growth_experiment(const EigenGrowthConfig& cfg);

/// Per-regime fits from rows (averages logs over reps per n first).
std::vector<RegimeFit> fit_eigen_growth(const std::vector<EigenGrowthRow>& rows, std::size_t fit_window,
                                        std::vector<std::size_t>* fit_ns = nullptr);

}  // namespace fraclap
