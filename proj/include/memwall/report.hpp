#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "memwall/errors.hpp"

namespace memwall {

// ---------------------------------------------------------------------------
// Report: the CLI's single output shape, an ordered table of named columns,
// emitted as CSV (default), JSON, or gnuplot-ready CSV. All numeric
// formatting is locale-independent and shortest-round-trip, so identical
// inputs produce byte-identical output.
// ---------------------------------------------------------------------------
using Cell = std::variant<std::uint64_t, double, std::string>;

struct Report {
    std::string command;
    std::string inputs_digest;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) {
        throw Error("failed to format double");
    }
    return std::string(buf, ptr);
}

inline std::string format_cell(const Cell& cell) {
    if (const auto* u = std::get_if<std::uint64_t>(&cell)) {
        return std::to_string(*u);
    }
    if (const auto* d = std::get_if<double>(&cell)) {
        return format_double(*d);
    }
    return std::get<std::string>(cell);
}

inline std::string to_csv(const Report& report, bool gnuplot_header = false) {
    std::string out;
    if (gnuplot_header) {
        out += "# command: " + report.command + "\n";
        out += "# inputs_digest: " + report.inputs_digest + "\n";
        out += "# columns:";
        for (const auto& c : report.columns) {
            out += ' ';
            out += c;
        }
        out += '\n';
    }
    for (std::size_t i = 0; i < report.columns.size(); ++i) {
        if (i) out += ',';
        out += report.columns[i];
    }
    out += '\n';
    for (const auto& row : report.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_cell(row[i]);
        }
        out += '\n';
    }
    return out;
}

inline std::string to_json(const Report& report) {
    nlohmann::json doc;
    doc["command"] = report.command;
    doc["inputs_digest"] = report.inputs_digest;
    doc["columns"] = report.columns;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : report.rows) {
        nlohmann::json jrow = nlohmann::json::array();
        for (const auto& cell : row) {
            if (const auto* u = std::get_if<std::uint64_t>(&cell)) {
                jrow.push_back(*u);
            } else if (const auto* d = std::get_if<double>(&cell)) {
                jrow.push_back(*d);
            } else {
                jrow.push_back(std::get<std::string>(cell));
            }
        }
        rows.push_back(std::move(jrow));
    }
    doc["rows"] = std::move(rows);
    return doc.dump(2) + "\n";
}

// FNV-1a over the invocation record and input file contents. A content
// fingerprint for reproducibility bookkeeping, not a cryptographic hash.
class Digest {
  public:
    Digest& feed(std::string_view bytes) {
        for (unsigned char c : bytes) {
            state_ ^= c;
            state_ *= 0x100000001b3ULL;
        }
        return *this;
    }

    std::string hex() const {
        static constexpr char digits[] = "0123456789abcdef";
        std::string out(16, '0');
        std::uint64_t v = state_;
        for (int i = 15; i >= 0; --i) {
            out[static_cast<std::size_t>(i)] = digits[v & 0xF];
            v >>= 4;
        }
        return out;
    }

  private:
    std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

}  // namespace memwall
