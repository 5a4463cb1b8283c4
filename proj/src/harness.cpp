#include "fraclap/harness.hpp"

#include "fraclap/continuum.hpp"
#include "fraclap/csv.hpp"
#include "fraclap/error.hpp"
#include "fraclap/log.hpp"
#include "fraclap/ssl.hpp"
#include "fraclap/tlp.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace fraclap::harness {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::ofstream open_for_write(const fs::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    return out;
}

void finish(std::ofstream& out, const fs::path& path) {
    out.flush();
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

std::string fmt(double v) { return csv::format_double(v); }

std::string fmt_optional(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

}  // namespace

// ---------------------------------------------------------------------------
// CSV outputs

void write_records(const std::vector<SweepRecord>& records, const fs::path& path) {
    std::vector<SweepRecord> sorted = records;
    sort_records(sorted);
    auto out = open_for_write(path);
    out << kRecordsHeader << '\n';
    for (const auto& r : sorted) {
        out << r.n << ',' << fmt(r.eps) << ',' << r.rep << ',' << r.seed << ',' << (r.connected ? 1 : 0)
            << ',' << fmt_optional(r.err) << ',' << fmt_optional(r.energy) << '\n';
    }
    finish(out, path);
}

std::vector<SweepRecord> read_records(const fs::path& path) {
    const auto lines = csv::read_lines(path);
    if (lines.empty() || lines.front().text != kRecordsHeader) {
        throw IoError(path.string() + ": missing records header");
    }
    std::vector<SweepRecord> records;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = csv::split_fields(lines[i].text);
        auto fail = [&](const std::string& why) {
            return IoError(path.string() + ": line " + std::to_string(lines[i].number) + ": " + why);
        };
        if (fields.size() != 7) {
            throw fail("expected 7 fields");
        }
        SweepRecord r;
        auto integer = [&](std::string_view f) {
            std::uint64_t v = 0;
            auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (ec != std::errc{} || ptr != f.data() + f.size()) {
                throw fail("bad integer '" + std::string(f) + "'");
            }
            return v;
        };
        auto real = [&](std::string_view f) -> std::optional<double> {
            if (f.empty()) {
                return std::nullopt;
            }
            auto v = csv::parse_double(f);
            if (!v) {
                throw fail("bad number '" + std::string(f) + "'");
            }
            return v;
        };
        r.n = static_cast<std::size_t>(integer(fields[0]));
        auto eps = real(fields[1]);
        if (!eps) {
            throw fail("missing eps");
        }
        r.eps = *eps;
        r.rep = static_cast<std::size_t>(integer(fields[2]));
        r.seed = integer(fields[3]);
        r.connected = integer(fields[4]) != 0;
        r.err = real(fields[5]);
        r.energy = real(fields[6]);
        records.push_back(r);
    }
    return records;
}

void write_transitions(const std::vector<TransitionResult>& transitions, const fs::path& path) {
    auto out = open_for_write(path);
    out << kTransitionsHeader << '\n';
    for (const auto& t : transitions) {
        out << t.n << ',' << fmt(t.eps_argmin) << ',' << fmt(t.eps_hat) << ',' << fmt(t.eps_star) << '\n';
    }
    finish(out, path);
}

void write_curves(const std::vector<ErrorCurve>& curves, const fs::path& path) {
    auto out = open_for_write(path);
    out << "n,eps,mean_err,count,smoothed\n";
    for (const auto& c : curves) {
        for (std::size_t i = 0; i < c.eps.size(); ++i) {
            out << c.n << ',' << fmt(c.eps[i]) << ',' << fmt(c.mean_err[i]) << ',' << c.count[i] << ','
                << (c.smoothed.empty() ? std::string() : fmt(c.smoothed[i])) << '\n';
        }
    }
    finish(out, path);
}

void write_transition_fits(const TransitionStudy& study, const fs::path& path) {
    auto out = open_for_write(path);
    out << "quantity,coefficient,exponent,n_min,n_max,points\n";
    const std::size_t lo = study.fit_ns.empty() ? 0 : study.fit_ns.front();
    const std::size_t hi = study.fit_ns.empty() ? 0 : study.fit_ns.back();
    out << "eps_hat," << fmt(study.eps_hat_fit.coefficient) << ',' << fmt(study.eps_hat_fit.exponent) << ','
        << lo << ',' << hi << ',' << study.fit_ns.size() << '\n';
    out << "eps_star," << fmt(study.eps_star_fit.coefficient) << ',' << fmt(study.eps_star_fit.exponent)
        << ',' << lo << ',' << hi << ',' << study.fit_ns.size() << '\n';
    finish(out, path);
}

void write_eigen_growth(const std::vector<EigenGrowthRow>& rows, const fs::path& path) {
    auto out = open_for_write(path);
    out << kEigenGrowthHeader << '\n';
    for (const auto& r : rows) {
        out << r.n << ',' << r.rep << ',' << fmt(r.eps_conn) << ',' << r.regime << ',' << r.k_star << ','
            << fmt(r.lambda_kstar) << ',' << fmt(r.psi_inf_norm) << '\n';
    }
    finish(out, path);
}

void write_eigen_growth_diagnostics(const std::vector<EigenGrowthRow>& rows, const fs::path& path) {
    auto out = open_for_write(path);
    out << "n,rep,regime,k_limit,k_star,lambda_n_kstar\n";
    for (const auto& r : rows) {
        out << r.n << ',' << r.rep << ',' << r.regime << ',' << r.k_limit << ',' << r.k_star << ','
            << fmt(r.lambda_n_kstar) << '\n';
    }
    finish(out, path);
}

void write_eigen_fits(const EigenGrowthResult& result, const fs::path& path) {
    auto out = open_for_write(path);
    out << "regime,intercept,slope,points\n";
    for (const auto& f : result.fits) {
        out << f.regime << ',' << fmt(f.fit.intercept) << ',' << fmt(f.fit.slope) << ',' << f.points << '\n';
    }
    finish(out, path);
}

std::vector<LabeledPoint> read_labels(const fs::path& path) {
    const auto table = csv::read_numeric(path, std::nullopt, /*allow_header=*/true);
    if (table.columns < 2) {
        throw IoError(path.string() + ": labels need at least one coordinate and a label column");
    }
    if (table.rows() == 0) {
        throw IoError(path.string() + ": no labels");
    }
    const std::size_t d = table.columns - 1;
    std::vector<LabeledPoint> labels;
    for (std::size_t r = 0; r < table.rows(); ++r) {
        const double* row = table.values.data() + r * table.columns;
        labels.push_back({TorusPoint(std::vector<double>(row, row + d)), row[d]});
    }
    return labels;
}

// ---------------------------------------------------------------------------
// Eigendecomposition cache

namespace {

constexpr std::array<char, 4> kMagic = {'F', 'L', 'S', 'E'};
constexpr std::size_t kHeaderBytes = 4 + 4 + 4 + 4 + 8 + 1 + 8;

template <typename T>
void put_le(std::string& buf, T value) {
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t,
                                 std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint8_t>>;
    const U bits = std::bit_cast<U>(value);
    for (std::size_t i = 0; i < sizeof(U); ++i) {
        buf.push_back(static_cast<char>((bits >> (8 * i)) & 0xFFU));
    }
}

template <typename T>
T get_le(const std::string& buf, std::size_t& pos) {
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t,
                                 std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint8_t>>;
    U bits = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) {
        bits |= static_cast<U>(static_cast<U>(static_cast<unsigned char>(buf[pos + i])) << (8 * i));
    }
    pos += sizeof(U);
    return std::bit_cast<T>(bits);
}

}  // namespace

void write_eigen_cache(const SpectralDecomposition& spec, const CacheKey& key, const fs::path& path) {
    const auto n = static_cast<std::size_t>(spec.eigenvalues.size());
    if (n != key.n || static_cast<std::size_t>(spec.eigenvectors.rows()) != n ||
        static_cast<std::size_t>(spec.eigenvectors.cols()) != n) {
        throw InvalidArgument("write_eigen_cache: decomposition size does not match the key");
    }
    std::string buf;
    buf.reserve(kHeaderBytes + 8 * (n + n * n));
    buf.append(kMagic.data(), kMagic.size());
    put_le(buf, kCacheVersion);
    put_le(buf, key.n);
    put_le(buf, key.d);
    put_le(buf, key.eps);
    put_le(buf, static_cast<std::uint8_t>(key.kernel));
    put_le(buf, key.seed);
    for (std::size_t k = 0; k < n; ++k) {
        put_le(buf, spec.eigenvalues(static_cast<Eigen::Index>(k)));
    }
    // Eigen matrices are column-major already.
    const double* data = spec.eigenvectors.data();
    for (std::size_t i = 0; i < n * n; ++i) {
        put_le(buf, data[i]);
    }
    auto out = open_for_write(path);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    finish(out, path);
}

std::pair<CacheKey, SpectralDecomposition> read_eigen_cache(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (buf.size() < kHeaderBytes) {
        throw IoError(path.string() + ": truncated header (" + std::to_string(buf.size()) + " bytes, expected " +
                      std::to_string(kHeaderBytes) + ")");
    }
    if (std::memcmp(buf.data(), kMagic.data(), kMagic.size()) != 0) {
        throw IoError(path.string() + ": bad magic bytes, not an eigen cache");
    }
    std::size_t pos = 4;
    const auto version = get_le<std::uint32_t>(buf, pos);
    if (version != kCacheVersion) {
        throw IoError(path.string() + ": cache format version " + std::to_string(version) +
                      " is not supported (expected " + std::to_string(kCacheVersion) + ")");
    }
    CacheKey key;
    key.n = get_le<std::uint32_t>(buf, pos);
    key.d = get_le<std::uint32_t>(buf, pos);
    key.eps = get_le<double>(buf, pos);
    const auto tag = get_le<std::uint8_t>(buf, pos);
    if (tag > static_cast<std::uint8_t>(KernelKind::Custom)) {
        throw IoError(path.string() + ": unknown kernel tag " + std::to_string(tag));
    }
    key.kernel = static_cast<KernelKind>(tag);
    key.seed = get_le<std::uint64_t>(buf, pos);

    const std::size_t n = key.n;
    const std::size_t expected = kHeaderBytes + 8 * (n + n * n);
    if (buf.size() != expected) {
        throw IoError(path.string() + ": expected " + std::to_string(expected) + " bytes for n = " +
                      std::to_string(n) + ", found " + std::to_string(buf.size()));
    }
    SpectralDecomposition spec;
    const auto nn = static_cast<Eigen::Index>(n);
    spec.eigenvalues.resize(nn);
    spec.eigenvectors.resize(nn, nn);
    for (Eigen::Index k = 0; k < nn; ++k) {
        spec.eigenvalues(k) = get_le<double>(buf, pos);
    }
    double* data = spec.eigenvectors.data();
    for (std::size_t i = 0; i < n * n; ++i) {
        data[i] = get_le<double>(buf, pos);
    }
    return {key, std::move(spec)};
}

SpectralDecomposition cache_roundtrip(const SpectralDecomposition& spec, const CacheKey& key,
                                      const fs::path& path) {
    write_eigen_cache(spec, key, path);
    return read_eigen_cache(path).second;
}

// ---------------------------------------------------------------------------
// Configuration

namespace {

enum class KeyType { Count, Seed, Real, Text, CountList, RealList, Labels };

struct KeySpec {
    const char* name;
    KeyType type;
    ordered_json fallback;  // null = required
    const char* help;
};

const std::vector<KeySpec>& keys_for(const std::string& subcommand) {
    static const std::map<std::string, std::vector<KeySpec>> table = {
        {"solve",
         {{"n", KeyType::Count, 0, "total node count including labeled points (ignored with --points)"},
          {"eps", KeyType::Real, nullptr, "graph length scale"},
          {"s", KeyType::Real, 16.0, "energy exponent"},
          {"seed", KeyType::Seed, 0, "sampling seed"},
          {"labels", KeyType::Labels, nullptr, "labels CSV (x1,...,xd,label)"},
          {"points", KeyType::Text, "", "optional headerless point CSV used instead of sampling"},
          {"kernel", KeyType::Text, "indicator", "weight profile (indicator)"},
          {"threshold", KeyType::Real, 0.5, "classification threshold"},
          {"cache_dir", KeyType::Text, "", "directory for eigendecomposition caches"},
          {"out", KeyType::Text, nullptr, "output CSV of node values"}}},
        {"continuum",
         {{"m", KeyType::Count, 100, "grid nodes per axis"},
          {"s", KeyType::Real, 16.0, "energy exponent"},
          {"variant", KeyType::Text, "fd", "spectrum: fd or analytic"},
          {"labels", KeyType::Labels, nullptr, "labels CSV (x1,...,xd,label)"},
          {"out", KeyType::Text, nullptr, "output grid CSV"}}},
        {"sweep",
         {{"n_values", KeyType::CountList, nullptr, "comma-separated node counts"},
          {"s", KeyType::Real, 16.0, "energy exponent"},
          {"reps", KeyType::Count, 10, "repetitions per n"},
          {"seed", KeyType::Seed, 0, "base seed"},
          {"labels", KeyType::Labels, nullptr, "labels CSV (x1,...,xd,label)"},
          {"grid_m", KeyType::Count, 100, "continuum grid nodes per axis"},
          {"eps_values", KeyType::RealList, ordered_json::array(), "explicit eps list (overrides the range)"},
          {"eps_count", KeyType::Count, 40, "number of geometric eps values per n"},
          {"eps_lo_factor", KeyType::Real, 1.05, "lowest eps as a multiple of the mean connectivity radius"},
          {"eps_hi_factor", KeyType::Real, 3.0, "highest eps as a multiple of n^(-1/(2s))"},
          {"bandwidth_factor", KeyType::Real, 3.0, "smoother bandwidth in median log-eps spacings"},
          {"fit_window", KeyType::Count, 5, "largest n values used in the fits"},
          {"interpolation", KeyType::Text, "bicubic", "bicubic or bilinear"},
          {"out_dir", KeyType::Text, nullptr, "output directory"}}},
        {"eigens",
         {{"n_values", KeyType::CountList, nullptr, "comma-separated node counts"},
          {"reps", KeyType::Count, 10, "repetitions per n"},
          {"seed", KeyType::Seed, 0, "base seed"},
          {"alpha", KeyType::Real, 4.0, "threshold constant for k^(1..3)"},
          {"d", KeyType::Count, 2, "dimension"},
          {"fit_window", KeyType::Count, 7, "largest n values used in the fits"},
          {"out_dir", KeyType::Text, nullptr, "output directory"}}},
        {"tlp",
         {{"a", KeyType::Text, nullptr, "first point/value CSV (x1,...,xd,value)"},
          {"b", KeyType::Text, nullptr, "second point/value CSV"},
          {"out", KeyType::Text, "", "optional output CSV"}}},
    };
    auto it = table.find(subcommand);
    if (it == table.end()) {
        throw InvalidArgument("unknown subcommand '" + subcommand + "'");
    }
    return it->second;
}

ordered_json labels_to_json(const std::vector<LabeledPoint>& labels) {
    ordered_json rows = ordered_json::array();
    for (const auto& l : labels) {
        ordered_json row = ordered_json::array();
        for (double c : l.point.coords()) {
            row.push_back(c);
        }
        row.push_back(l.label);
        rows.push_back(row);
    }
    return rows;
}

std::vector<LabeledPoint> labels_from_json(const ordered_json& rows) {
    std::vector<LabeledPoint> labels;
    std::size_t width = 0;
    for (const auto& row : rows) {
        if (!row.is_array() || row.size() < 2 || (width != 0 && row.size() != width)) {
            throw InvalidArgument("labels: every row must be [x1, ..., xd, label] of equal length");
        }
        width = row.size();
        std::vector<double> coords;
        for (std::size_t j = 0; j + 1 < row.size(); ++j) {
            if (!row[j].is_number()) {
                throw InvalidArgument("labels: coordinates must be numbers");
            }
            coords.push_back(row[j].get<double>());
        }
        if (!row.back().is_number()) {
            throw InvalidArgument("labels: label must be a number");
        }
        labels.push_back({TorusPoint(std::move(coords)), row.back().get<double>()});
    }
    if (labels.empty()) {
        throw InvalidArgument("labels: at least one label is required");
    }
    return labels;
}

ordered_json parse_flag(const KeySpec& spec, const std::string& text) {
    const std::string where = "--" + std::string(spec.name) + ": ";
    auto parse_count = [&](std::string_view f) -> std::uint64_t {
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
        if (ec != std::errc{} || ptr != f.data() + f.size()) {
            throw InvalidArgument(where + "expected a nonnegative integer, got '" + std::string(f) + "'");
        }
        return v;
    };
    auto parse_real = [&](std::string_view f) {
        auto v = csv::parse_double(f);
        if (!v) {
            throw InvalidArgument(where + "expected a finite number, got '" + std::string(f) + "'");
        }
        return *v;
    };
    switch (spec.type) {
    case KeyType::Count:
    case KeyType::Seed:
        return parse_count(text);
    case KeyType::Real:
        return parse_real(text);
    case KeyType::Text:
    case KeyType::Labels:
        return text;
    case KeyType::CountList: {
        ordered_json arr = ordered_json::array();
        if (!text.empty()) {
            for (auto f : csv::split_fields(text)) {
                arr.push_back(parse_count(f));
            }
        }
        return arr;
    }
    case KeyType::RealList: {
        ordered_json arr = ordered_json::array();
        if (!text.empty()) {
            for (auto f : csv::split_fields(text)) {
                arr.push_back(parse_real(f));
            }
        }
        return arr;
    }
    }
    return nullptr;
}

void check_type(const KeySpec& spec, const ordered_json& value) {
    const std::string where = "config key '" + std::string(spec.name) + "': ";
    auto is_count = [](const ordered_json& v) {
        return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
    };
    bool ok = false;
    switch (spec.type) {
    case KeyType::Count:
    case KeyType::Seed:
        ok = is_count(value);
        break;
    case KeyType::Real:
        ok = value.is_number();
        break;
    case KeyType::Text:
        ok = value.is_string();
        break;
    case KeyType::Labels:
        ok = value.is_string() || value.is_array();
        break;
    case KeyType::CountList:
        ok = value.is_array() && std::all_of(value.begin(), value.end(), is_count);
        break;
    case KeyType::RealList:
        ok = value.is_array() &&
             std::all_of(value.begin(), value.end(), [](const ordered_json& v) { return v.is_number(); });
        break;
    }
    if (!ok) {
        throw InvalidArgument(where + "wrong type (" + value.dump() + ")");
    }
}

}  // namespace

ordered_json config_schema(const std::string& subcommand) {
    ordered_json schema = ordered_json::object();
    for (const auto& k : keys_for(subcommand)) {
        schema[k.name] = k.fallback;
    }
    return schema;
}

RunConfig resolve_config(const std::string& subcommand, const fs::path* config_file,
                         const ordered_json& overrides) {
    const auto& specs = keys_for(subcommand);
    auto find_spec = [&](const std::string& name) -> const KeySpec& {
        for (const auto& k : specs) {
            if (name == k.name) {
                return k;
            }
        }
        throw InvalidArgument("unknown config key '" + name + "' for " + subcommand);
    };

    RunConfig cfg{subcommand, config_schema(subcommand)};
    auto apply = [&](const ordered_json& layer) {
        for (const auto& [name, value] : layer.items()) {
            const KeySpec& spec = find_spec(name);
            check_type(spec, value);
            cfg.values[name] = value;
        }
    };

    if (config_file != nullptr) {
        std::ifstream in(*config_file);
        if (!in) {
            throw InvalidArgument("cannot open config file " + config_file->string());
        }
        ordered_json file;
        try {
            file = ordered_json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw InvalidArgument("config file " + config_file->string() + ": " + e.what());
        }
        if (!file.is_object()) {
            throw InvalidArgument("config file " + config_file->string() + ": expected a JSON object");
        }
        if (file.contains("tool") && file.contains("config")) {
            // A manifest from an earlier run.
            if (file.value("subcommand", "") != subcommand) {
                throw InvalidArgument("manifest " + config_file->string() + " was written by '" +
                                      file.value("subcommand", "") + "', not '" + subcommand + "'");
            }
            apply(file["config"]);
        } else {
            apply(file);
        }
    }
    apply(overrides);

    for (const auto& k : specs) {
        if (cfg.values[k.name].is_null()) {
            throw InvalidArgument("missing required option --" + std::string(k.name));
        }
    }
    // Labels are stored inline so that a manifest is self-contained.
    if (cfg.values.contains("labels") && cfg.values["labels"].is_string()) {
        cfg.values["labels"] = labels_to_json(read_labels(cfg.values["labels"].get<std::string>()));
    }
    if (cfg.values.contains("labels")) {
        labels_from_json(cfg.values["labels"]);
    }
    return cfg;
}

ordered_json manifest_json(const RunConfig& cfg, const std::vector<std::string>& outputs) {
    ordered_json m = ordered_json::object();
    m["tool"] = "fraclap";
    m["version"] = FRACLAP_VERSION;
    m["subcommand"] = cfg.subcommand;
    if (cfg.values.contains("seed")) {
        m["seed"] = cfg.values["seed"];
    }
    m["rng"] = "splitmix64-counter";
    m["config"] = cfg.values;
    m["outputs"] = outputs;
    return m;
}

// ---------------------------------------------------------------------------
// Subcommands

namespace {

void write_manifest(const RunConfig& cfg, const std::vector<std::string>& outputs, const fs::path& path) {
    auto out = open_for_write(path);
    out << manifest_json(cfg, outputs).dump(2) << '\n';
    finish(out, path);
}

/// Creates missing parent directories and checks the file can be opened.
void prepare_output_file(const fs::path& path) {
    if (path.empty()) {
        throw InvalidArgument("empty output path");
    }
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
        if (ec) {
            throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
        }
    }
    std::ofstream probe(path, std::ios::binary | std::ios::app);
    if (!probe) {
        throw IoError("cannot write " + path.string());
    }
}

void prepare_output_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw IoError("cannot create output directory " + dir.string());
    }
}

std::size_t count(const RunConfig& cfg, const char* key) { return cfg.values[key].get<std::size_t>(); }
double real(const RunConfig& cfg, const char* key) { return cfg.values[key].get<double>(); }
std::string text(const RunConfig& cfg, const char* key) { return cfg.values[key].get<std::string>(); }

std::vector<std::size_t> count_list(const RunConfig& cfg, const char* key) {
    return cfg.values[key].get<std::vector<std::size_t>>();
}

fs::path cache_file(const fs::path& dir, const CacheKey& key) {
    std::ostringstream name;
    name << "eig_n" << key.n << "_d" << key.d << "_eps" << std::hex << std::bit_cast<std::uint64_t>(key.eps)
         << std::dec << "_k" << static_cast<int>(key.kernel) << "_seed" << key.seed << ".flse";
    return dir / name.str();
}

int run_solve(const RunConfig& cfg, std::ostream& out) {
    const auto labels = labels_from_json(cfg.values["labels"]);
    const std::size_t d = labels.front().point.dim();
    const double eps = real(cfg, "eps");
    const double s = real(cfg, "s");
    if (text(cfg, "kernel") != "indicator") {
        throw InvalidArgument("--kernel: only 'indicator' is available from the command line");
    }
    const fs::path out_path = text(cfg, "out");
    const fs::path points_path = text(cfg, "points");
    const fs::path cache_dir = text(cfg, "cache_dir");
    const std::uint64_t seed = cfg.values["seed"].get<std::uint64_t>();

    std::vector<TorusPoint> fixed;
    for (const auto& l : labels) {
        fixed.push_back(l.point);
    }
    const SampleSet head = SampleSet::from_points(fixed);
    SampleSet points;
    if (!points_path.empty()) {
        points = SampleSet::concat(head, load_points(points_path, d));
    } else {
        const std::size_t n = count(cfg, "n");
        if (n <= labels.size()) {
            throw InvalidArgument("--n must exceed the number of labels (" + std::to_string(labels.size()) + ")");
        }
        points = SampleSet::concat(head, sample_uniform(n - labels.size(), d, seed));
    }
    prepare_output_file(out_path);
    if (!cache_dir.empty()) {
        prepare_output_dir(cache_dir);
    }
    write_manifest(cfg, {out_path.filename().string()}, out_path.string() + ".manifest.json");

    const Kernel kernel = Kernel::indicator();
    const WeightedGraph g = build_weight_matrix(points, eps, kernel);
    if (!is_connected(g)) {
        throw NumericalError("graph is not connected at eps = " + fmt(eps) + " (connectivity radius " +
                             fmt(connectivity_radius(points, kernel)) + ")");
    }

    SpectralDecomposition spec;
    const bool cacheable = !cache_dir.empty() && points_path.empty();
    const CacheKey key{static_cast<std::uint32_t>(points.size()), static_cast<std::uint32_t>(d), eps,
                       kernel.kind(), seed};
    const fs::path cached = cacheable ? cache_file(cache_dir, key) : fs::path();
    if (cacheable && fs::exists(cached)) {
        auto [stored_key, stored] = read_eigen_cache(cached);
        if (!(stored_key == key)) {
            throw IoError(cached.string() + ": header does not match the requested graph");
        }
        spec = std::move(stored);
        log::info("solve: loaded " + cached.string());
    } else {
        spec = eigendecompose(graph_laplacian(g));
        if (cacheable) {
            write_eigen_cache(spec, key, cached);
        }
    }

    std::vector<Constraint> constraints;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        constraints.push_back({i, labels[i].label});
    }
    const LabelFunction u = solve_constrained(spec, ConstraintSet(constraints), s);
    const auto classes = classify(u.values, real(cfg, "threshold"));

    auto file = open_for_write(out_path);
    for (std::size_t j = 0; j < d; ++j) {
        file << 'x' << (j + 1) << ',';
    }
    file << "u,class\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (double c : points.point(i)) {
            file << fmt(c) << ',';
        }
        file << fmt(u.values(static_cast<Eigen::Index>(i))) << ',' << classes[i] << '\n';
    }
    finish(file, out_path);
    out << "n=" << points.size() << " eps=" << fmt(eps) << " s=" << fmt(s) << " energy=" << fmt(u.energy)
        << " lambda2=" << fmt(spec.eigenvalues(1)) << '\n';
    return 0;
}

int run_continuum(const RunConfig& cfg, std::ostream& out) {
    const auto labels = labels_from_json(cfg.values["labels"]);
    const std::string variant_name = text(cfg, "variant");
    SpectrumVariant variant{};
    if (variant_name == "fd") {
        variant = SpectrumVariant::FiniteDifference;
    } else if (variant_name == "analytic") {
        variant = SpectrumVariant::Analytic;
    } else {
        throw InvalidArgument("--variant must be 'fd' or 'analytic'");
    }
    const fs::path out_path = text(cfg, "out");
    prepare_output_file(out_path);
    write_manifest(cfg, {out_path.filename().string()}, out_path.string() + ".manifest.json");

    const PeriodicGrid grid{count(cfg, "m"), labels.front().point.dim()};
    const auto spec = continuum_spectrum(grid, variant);
    std::vector<std::pair<TorusPoint, double>> constraints;
    for (const auto& l : labels) {
        constraints.emplace_back(l.point, l.label);
    }
    const auto sol = solve_continuum_constrained(spec, constraints, real(cfg, "s"));
    write_grid_csv(sol.u, out_path);
    out << "m=" << grid.m << " s=" << fmt(real(cfg, "s")) << " energy=" << fmt(sol.energy) << '\n';
    return 0;
}

SweepConfig sweep_config_from(const RunConfig& cfg) {
    SweepConfig sc;
    sc.n_values = count_list(cfg, "n_values");
    sc.s = real(cfg, "s");
    sc.reps = count(cfg, "reps");
    sc.base_seed = cfg.values["seed"].get<std::uint64_t>();
    sc.labels = labels_from_json(cfg.values["labels"]);
    sc.grid_m = count(cfg, "grid_m");
    sc.eps.values = cfg.values["eps_values"].get<std::vector<double>>();
    sc.eps.count = count(cfg, "eps_count");
    sc.eps.lo_factor = real(cfg, "eps_lo_factor");
    sc.eps.hi_factor = real(cfg, "eps_hi_factor");
    const std::string interp = text(cfg, "interpolation");
    if (interp == "bicubic") {
        sc.interpolation = Interpolation::Bicubic;
    } else if (interp == "bilinear") {
        sc.interpolation = Interpolation::Bilinear;
    } else {
        throw InvalidArgument("--interpolation must be 'bicubic' or 'bilinear'");
    }
    sc.validate();
    return sc;
}

int run_sweep_command(const RunConfig& cfg, std::ostream& out) {
    const SweepConfig sc = sweep_config_from(cfg);
    TransitionOptions options;
    options.bandwidth_factor = real(cfg, "bandwidth_factor");
    options.fit_window = count(cfg, "fit_window");
    if (!(options.bandwidth_factor > 0.0) || options.fit_window < 2) {
        throw InvalidArgument("--bandwidth-factor must be positive and --fit-window at least 2");
    }
    const fs::path dir = text(cfg, "out_dir");
    prepare_output_dir(dir);
    write_manifest(cfg, {"records.csv", "curves.csv", "transitions.csv", "fits.csv"}, dir / "manifest.json");

    const auto records = run_sweep(sc);
    write_records(records, dir / "records.csv");
    if (std::none_of(records.begin(), records.end(), [](const SweepRecord& r) { return r.err.has_value(); })) {
        throw NumericalError("no connected instances");
    }
    TransitionStudy study = transition_curves(records, options);
    write_curves(study.curves, dir / "curves.csv");
    write_transitions(study.transitions, dir / "transitions.csv");
    fit_transitions(study, options);
    write_transition_fits(study, dir / "fits.csv");
    out << "eps_hat ~ " << fmt(study.eps_hat_fit.coefficient) << " / n^" << fmt(study.eps_hat_fit.exponent)
        << "\neps_star ~ " << fmt(study.eps_star_fit.coefficient) << " / n^"
        << fmt(study.eps_star_fit.exponent) << '\n';
    return 0;
}

int run_eigens(const RunConfig& cfg, std::ostream& out) {
    EigenGrowthConfig ec;
    ec.n_values = count_list(cfg, "n_values");
    ec.reps = count(cfg, "reps");
    ec.base_seed = cfg.values["seed"].get<std::uint64_t>();
    ec.alpha = real(cfg, "alpha");
    ec.d = count(cfg, "d");
    ec.fit_window = count(cfg, "fit_window");
    const fs::path dir = text(cfg, "out_dir");
    prepare_output_dir(dir);
    write_manifest(cfg, {"eigen_growth.csv", "eigen_growth_diagnostics.csv", "eigen_fits.csv"},
                   dir / "manifest.json");

    const auto result = eigen_growth_experiment(ec);
    write_eigen_growth(result.rows, dir / "eigen_growth.csv");
    write_eigen_growth_diagnostics(result.rows, dir / "eigen_growth_diagnostics.csv");
    write_eigen_fits(result, dir / "eigen_fits.csv");
    for (const auto& f : result.fits) {
        out << "regime " << f.regime << ": log|psi|_inf = " << fmt(f.fit.intercept) << " + "
            << fmt(f.fit.slope) << " log(lambda)\n";
    }
    return 0;
}

EmpiricalPair read_pair(const fs::path& path) {
    const auto table = csv::read_numeric(path, std::nullopt, /*allow_header=*/true);
    if (table.columns < 2 || table.rows() == 0) {
        throw IoError(path.string() + ": expected rows of x1,...,xd,value");
    }
    const std::size_t d = table.columns - 1;
    std::vector<double> coords;
    std::vector<double> values;
    for (std::size_t r = 0; r < table.rows(); ++r) {
        const double* row = table.values.data() + r * table.columns;
        coords.insert(coords.end(), row, row + d);
        values.push_back(row[d]);
    }
    return {SampleSet(d, std::move(coords)), std::move(values)};
}

int run_tlp(const RunConfig& cfg, std::ostream& out) {
    const EmpiricalPair a = read_pair(text(cfg, "a"));
    const EmpiricalPair b = read_pair(text(cfg, "b"));
    const fs::path out_path = text(cfg, "out");
    if (!out_path.empty()) {
        prepare_output_file(out_path);
        write_manifest(cfg, {out_path.filename().string()}, out_path.string() + ".manifest.json");
    }
    const double dist = tl2_distance(a, b);
    if (!out_path.empty()) {
        auto file = open_for_write(out_path);
        file << "tl2_distance\n" << fmt(dist) << '\n';
        finish(file, out_path);
    }
    out << fmt(dist) << '\n';
    return 0;
}

}  // namespace

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        if (cfg.subcommand == "solve") {
            return run_solve(cfg, out);
        }
        if (cfg.subcommand == "continuum") {
            return run_continuum(cfg, out);
        }
        if (cfg.subcommand == "sweep") {
            return run_sweep_command(cfg, out);
        }
        if (cfg.subcommand == "eigens") {
            return run_eigens(cfg, out);
        }
        if (cfg.subcommand == "tlp") {
            return run_tlp(cfg, out);
        }
        throw InvalidArgument("unknown subcommand '" + cfg.subcommand + "'");
    } catch (const NumericalError& e) {
        err << "fraclap " << cfg.subcommand << ": " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        err << "fraclap " << cfg.subcommand << ": " << e.what() << '\n';
        return 1;
    }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fractional Laplacian semi-supervised learning on random geometric graphs", "fraclap"};
    app.require_subcommand(1);
    app.fallthrough();
    bool verbose = false;
    app.add_flag("-v,--verbose", verbose, "log progress to standard error");
    app.set_version_flag("--version", std::string(FRACLAP_VERSION));

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"solve", "one graph, one constrained solve; writes node values"},
        {"continuum", "grid reference solution; writes an m x m CSV"},
        {"sweep", "well-posed / ill-posed transition study over (n, eps)"},
        {"eigens", "sup-norm growth of graph Laplacian eigenvectors"},
        {"tlp", "TL2 distance between two point/value CSVs"},
    };
    std::map<std::string, std::map<std::string, std::string>> given;
    std::map<std::string, std::string> config_paths;
    std::map<std::string, CLI::App*> subapps;
    for (const auto& [name, description] : commands) {
        CLI::App* sub = app.add_subcommand(name, description);
        subapps[name] = sub;
        sub->add_option("--config", config_paths[name], "JSON config file or manifest of an earlier run");
        for (const auto& key : keys_for(name)) {
            std::string flag = key.name;
            std::replace(flag.begin(), flag.end(), '_', '-');
            std::string help = key.help;
            if (!key.fallback.is_null()) {
                help += " [default: " + key.fallback.dump() + "]";
            }
            sub->add_option("--" + flag, given[name][key.name], help);
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << FRACLAP_VERSION << '\n';
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "fraclap: " << e.what() << "\n\n" << app.help();
        return 1;
    }
    log::set_level(verbose ? log::Level::Info : log::Level::Warning);

    for (const auto& [name, sub] : subapps) {
        if (!sub->parsed()) {
            continue;
        }
        try {
            ordered_json overrides = ordered_json::object();
            for (const auto& key : keys_for(name)) {
                std::string flag = key.name;
                std::replace(flag.begin(), flag.end(), '_', '-');
                if (sub->count("--" + flag) > 0) {
                    overrides[key.name] = parse_flag(key, given[name][key.name]);
                }
            }
            const fs::path config_path = config_paths[name];
            const RunConfig cfg =
                resolve_config(name, sub->count("--config") > 0 ? &config_path : nullptr, overrides);
            return execute(cfg, out, err);
        } catch (const Error& e) {
            err << "fraclap " << name << ": " << e.what() << "\n\n" << sub->help();
            return 1;
        }
    }
    err << app.help();
    return 1;
}

}  // namespace fraclap::harness
