#include "fraclap/csv.hpp"

#include "fraclap/error.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>

namespace fraclap::csv {

std::string format_double(double value) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) {
        throw Error("format_double: conversion failed");
    }
    return {buf.data(), end};
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

}  // namespace

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return out;
}

std::optional<double> parse_double(std::string_view field) {
    field = trim(field);
    if (!field.empty() && field.front() == '+') {
        field.remove_prefix(1);
    }
    if (field.empty()) {
        return std::nullopt;
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(v)) {
        return std::nullopt;
    }
    return v;
}

std::vector<Line> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::vector<Line> lines;
    std::string text;
    std::size_t number = 0;
    while (std::getline(in, text)) {
        ++number;
        if (!text.empty() && text.back() == '\r') {
            text.pop_back();
        }
        if (trim(text).empty()) {
            continue;
        }
        lines.push_back({number, text});
    }
    return lines;
}

Table read_numeric(const std::filesystem::path& path, std::optional<std::size_t> columns,
                   bool allow_header) {
    Table table;
    const auto lines = read_lines(path);
    bool first = true;
    for (const auto& line : lines) {
        auto fields = split_fields(line.text);
        if (first) {
            first = false;
            if (allow_header && !parse_double(fields.front())) {
                for (auto f : fields) {
                    table.header.emplace_back(f);
                }
                if (columns && fields.size() != *columns) {
                    throw IoError(path.string() + ": line " + std::to_string(line.number) +
                                  ": expected " + std::to_string(*columns) + " columns, got " +
                                  std::to_string(fields.size()));
                }
                columns = fields.size();
                continue;
            }
        }
        if (!columns) {
            columns = fields.size();
        }
        if (fields.size() != *columns) {
            throw IoError(path.string() + ": line " + std::to_string(line.number) + ": expected " +
                          std::to_string(*columns) + " columns, got " +
                          std::to_string(fields.size()));
        }
        for (auto f : fields) {
            auto v = parse_double(f);
            if (!v) {
                throw IoError(path.string() + ": line " + std::to_string(line.number) +
                              ": not a finite number: '" + std::string(f) + "'");
            }
            table.values.push_back(*v);
        }
    }
    table.columns = columns.value_or(0);
    return table;
}

}  // namespace fraclap::csv
