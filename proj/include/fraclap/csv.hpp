#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fraclap::csv {

/// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

/// Split one CSV line on commas. No quoting support; fields are trimmed.
std::vector<std::string_view> split_fields(std::string_view line);

/// Parse a finite decimal real, or nullopt.
std::optional<double> parse_double(std::string_view field);

/// Read every line of a text file, stripping '\r' and skipping blank lines.
/// Each entry keeps its 1-based physical line number.
struct Line {
    std::size_t number;
    std::string text;
};
std::vector<Line> read_lines(const std::filesystem::path& path);

/// Parse a numeric table. With `allow_header`, a first row whose leading
/// field is not numeric is taken as the header. Every data row must have
/// exactly `columns` finite fields (inferred from the first row if absent).
struct Table {
    std::vector<std::string> header;  // empty when the file has none
    std::size_t columns = 0;
    std::vector<double> values;       // row-major
    [[nodiscard]] std::size_t rows() const { return columns == 0 ? 0 : values.size() / columns; }
};
Table read_numeric(const std::filesystem::path& path, std::optional<std::size_t> columns,
                   bool allow_header);

}  // namespace fraclap::csv
