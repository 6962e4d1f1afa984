#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "memwall/errors.hpp"

namespace memwall {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) {
        throw IoError("error while reading file: " + path);
    }
    return buf.str();
}

namespace csv {

// Minimal CSV: comma-separated fields, no quoting, '#' lines and blank lines
// skipped. Enough for the flat numeric tables this tool exchanges.
inline std::vector<std::string> split_fields(std::string_view line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.emplace_back(line.substr(start));
            break;
        }
        fields.emplace_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    for (auto& f : fields) {
        while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.erase(f.begin());
        while (!f.empty() && (f.back() == ' ' || f.back() == '\t' || f.back() == '\r')) f.pop_back();
    }
    return fields;
}

struct Row {
    std::size_t line_number = 0;  // 1-based, in the original file
    std::vector<std::string> fields;
};

// Splits a CSV document into header + data rows, preserving line numbers for
// error messages.
struct Table {
    std::vector<std::string> header;
    std::vector<Row> rows;

    std::size_t column(std::string_view name) const {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return i;
        }
        throw ParseError("CSV is missing required column '" + std::string(name) + "'");
    }

    bool has_column(std::string_view name) const {
        for (const auto& h : header) {
            if (h == name) return true;
        }
        return false;
    }
};

inline Table parse(const std::string& text) {
    Table table;
    std::size_t line_number = 0;
    std::size_t start = 0;
    bool have_header = false;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        std::string_view line(text.data() + start, end - start);
        ++line_number;
        start = end + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() || line.front() == '#') {
            if (start > text.size()) break;
            continue;
        }
        if (!have_header) {
            table.header = split_fields(line);
            have_header = true;
        } else {
            table.rows.push_back({line_number, split_fields(line)});
        }
        if (start > text.size()) break;
    }
    if (!have_header) {
        throw ParseError("CSV document is empty");
    }
    return table;
}

inline double parse_double(const std::string& field, std::size_t line_number,
                           std::string_view column) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || field.empty()) {
        throw ParseError("CSV line " + std::to_string(line_number) +
                         ": column '" + std::string(column) +
                         "' is not a number: '" + field + "'");
    }
    return value;
}

}  // namespace csv
}  // namespace memwall
