#pragma once

#include "fraclap/experiments.hpp"
#include "fraclap/graph.hpp"
#include "fraclap/spectral.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace fraclap::harness {

// ---------------------------------------------------------------------------
// CSV outputs. Floats are written in shortest round-trip form.

inline constexpr const char* kRecordsHeader = "n,eps,rep,seed,connected,err,energy";
inline constexpr const char* kTransitionsHeader = "n,eps_argmin,eps_hat,eps_star";
inline constexpr const char* kEigenGrowthHeader = "n,rep,eps_conn,regime,k_star,lambda_kstar,psi_inf_norm";

/// Rows are written sorted by (n, eps, rep) whatever the input order.
void write_records(const std::vector<SweepRecord>& records, const std::filesystem::path& path);
std::vector<SweepRecord> read_records(const std::filesystem::path& path);

void write_transitions(const std::vector<TransitionResult>& transitions, const std::filesystem::path& path);
void write_curves(const std::vector<ErrorCurve>& curves, const std::filesystem::path& path);
void write_transition_fits(const TransitionStudy& study, const std::filesystem::path& path);
void write_eigen_growth(const std::vector<EigenGrowthRow>& rows, const std::filesystem::path& path);
void write_eigen_growth_diagnostics(const std::vector<EigenGrowthRow>& rows,
                                    const std::filesystem::path& path);
void write_eigen_fits(const EigenGrowthResult& result, const std::filesystem::path& path);

/// Labels CSV: header x1,...,xd,label.
std::vector<LabeledPoint> read_labels(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Eigendecomposition cache.
//
// Little-endian layout: "FLSE", u32 version, u32 n, u32 d, f64 eps, u8 kernel
// tag, u64 seed, n f64 eigenvalues, n*n f64 eigenvector entries column-major.

inline constexpr std::uint32_t kCacheVersion = 1;

struct CacheKey {
    std::uint32_t n = 0;
    std::uint32_t d = 0;
    double eps = 0.0;
    KernelKind kernel = KernelKind::Indicator;
    std::uint64_t seed = 0;

    friend bool operator==(const CacheKey&, const CacheKey&) = default;
};

void write_eigen_cache(const SpectralDecomposition& spec, const CacheKey& key,
                       const std::filesystem::path& path);

/// Throws IoError on bad magic, unknown version, or a size that does not
/// match the header.
std::pair<CacheKey, SpectralDecomposition> read_eigen_cache(const std::filesystem::path& path);

/// Write then read back.
SpectralDecomposition cache_roundtrip(const SpectralDecomposition& spec, const CacheKey& key,
                                      const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Configuration and manifests.

/// A fully resolved, flat parameter set for one subcommand. Keys follow the
/// documented schema; `values` holds every key including defaults.
struct RunConfig {
    std::string subcommand;
    nlohmann::ordered_json values;
};

/// Documented keys of a subcommand, with defaults (null = required).
nlohmann::ordered_json config_schema(const std::string& subcommand);

/// Start from the schema defaults, apply a config file (flat object or a
/// manifest written by a previous run), then `overrides`. Unknown keys and
/// type mismatches throw InvalidArgument; missing required keys too.
RunConfig resolve_config(const std::string& subcommand, const std::filesystem::path* config_file,
                         const nlohmann::ordered_json& overrides);

nlohmann::ordered_json manifest_json(const RunConfig& cfg, const std::vector<std::string>& outputs);

/// Run one subcommand from a resolved config. Returns the exit code and
/// reports on the given streams.
int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Full command line entry point: 0 success, 1 usage error, 2 numerical failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fraclap::harness
