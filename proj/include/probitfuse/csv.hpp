#pragma once
// Minimal comma-separated reader/writer: double-quoted fields with ""
// escapes, no embedded newlines. Row numbers are 1-based with the header as
// row 1.

#include "probitfuse/errors.hpp"

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace probitfuse::csv {

struct Row {
    std::size_t line = 0;
    std::vector<std::string> cells;
};

struct Table {
    std::string path;
    std::vector<std::string> header;
    std::vector<Row> rows;

    // Column index of `name`, or header.size() when absent.
    std::size_t column(std::string_view name) const noexcept {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return i;
        }
        return header.size();
    }
};

inline std::vector<std::string> split(std::string_view line, const std::string& path, std::size_t row) {
    std::vector<std::string> out;
    std::string cell;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cell.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell.push_back(c);
            }
        } else if (c == '"' && cell.empty() && !was_quoted) {
            quoted = true;
            was_quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(cell));
            cell.clear();
            was_quoted = false;
        } else {
            cell.push_back(c);
        }
    }
    if (quoted) throw ParseError(path, row, "unterminated quoted field");
    out.push_back(std::move(cell));
    return out;
}

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

// Reads a file with a header row. Blank lines are skipped; every data row
// must have as many cells as the header.
inline Table read(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    Table t;
    t.path = path;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        auto cells = split(line, path, n);
        for (auto& c : cells) c = trim(c);
        if (t.header.empty()) {
            t.header = std::move(cells);
            continue;
        }
        if (cells.size() != t.header.size()) {
            throw ParseError(path, n, "expected " + std::to_string(t.header.size()) + " fields, found " +
                                          std::to_string(cells.size()));
        }
        t.rows.push_back({n, std::move(cells)});
    }
    if (t.header.empty()) throw ParseError(path, 1, "missing header row");
    return t;
}

inline std::string escape(std::string_view s) {
    if (s.find_first_of(",\"") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

inline std::string join(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i != 0) out.push_back(',');
        out += escape(cells[i]);
    }
    return out;
}

inline std::uint64_t parse_count(const std::string& cell, const Table& t, std::size_t line, std::string_view what) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw ParseError(t.path, line, std::string(what) + " must be a nonnegative integer, got '" + cell + "'");
    }
    return v;
}

inline double parse_real(const std::string& cell, const Table& t, std::size_t line, std::string_view what) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw ParseError(t.path, line, std::string(what) + " must be a number, got '" + cell + "'");
    }
    return v;
}

} // namespace probitfuse::csv
