#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "memwall/cost_model.hpp"
#include "memwall/csv.hpp"
#include "memwall/errors.hpp"

namespace memwall {

// ---------------------------------------------------------------------------
// HardwareSpec: one device with peak compute rate, DRAM bandwidth, memory
// capacity, optional interconnect bandwidth. Year is kept for trend fitting.
// ---------------------------------------------------------------------------
struct HardwareSpec {
    std::string name;
    double year = 0.0;
    double peak_flops = 0.0;          // FLOP/s
    double dram_bw = 0.0;             // bytes/s
    std::uint64_t mem_capacity = 0;   // bytes
    std::optional<double> interconnect_bw;  // bytes/s
};

inline HardwareSpec validated(HardwareSpec hw) {
    if (!(hw.peak_flops > 0.0)) throw ValidationError("peak_flops must be > 0");
    if (!(hw.dram_bw > 0.0)) throw ValidationError("dram_bw must be > 0");
    if (hw.mem_capacity == 0) throw ValidationError("mem_capacity must be > 0");
    if (hw.interconnect_bw && !(*hw.interconnect_bw > 0.0)) {
        throw ValidationError("interconnect_bw must be > 0 when present");
    }
    return hw;
}

// Arithmetic intensity at which the compute roof meets the bandwidth ramp.
// Workloads below it are DRAM-bound on this device.
inline double ridge_point(const HardwareSpec& hw) {
    return hw.peak_flops / hw.dram_bw;
}

enum class Boundedness { compute_bound, memory_bound, balanced };

inline std::string to_string(Boundedness b) {
    switch (b) {
        case Boundedness::compute_bound: return "compute_bound";
        case Boundedness::memory_bound: return "memory_bound";
        case Boundedness::balanced: return "balanced";
    }
    throw DomainError("invalid boundedness value");
}

struct RooflineEstimate {
    double compute_time = 0.0;  // seconds, total_flops / peak_flops
    double memory_time = 0.0;   // seconds, total_mops / dram_bw
    double latency = 0.0;       // max of the two
    Boundedness bound = Boundedness::balanced;
    double ridge_intensity = 0.0;  // the device ridge point
};

// Relative half-width of the "balanced" band around compute_time == memory_time.
inline constexpr double kBalancedEpsilon = 0.01;

// Pure max-form roofline: no overlap factor, no occupancy terms.
inline RooflineEstimate estimate_latency(const CostBreakdown& cost,
                                         const HardwareSpec& hardware) {
    const HardwareSpec hw = validated(hardware);
    RooflineEstimate est;
    est.compute_time = static_cast<double>(cost.total_flops) / hw.peak_flops;
    est.memory_time = static_cast<double>(cost.total_mops) / hw.dram_bw;
    est.latency = std::max(est.compute_time, est.memory_time);
    est.ridge_intensity = ridge_point(hw);
    if (std::abs(est.compute_time - est.memory_time) <=
        kBalancedEpsilon * est.latency) {
        est.bound = Boundedness::balanced;
    } else if (est.memory_time > est.compute_time) {
        est.bound = Boundedness::memory_bound;
    } else {
        est.bound = Boundedness::compute_bound;
    }
    return est;
}

inline std::vector<double> normalized_latency(
    const std::vector<RooflineEstimate>& estimates, std::size_t baseline_index) {
    if (baseline_index >= estimates.size()) {
        throw DomainError("normalized_latency: baseline index " +
                          std::to_string(baseline_index) + " out of range");
    }
    const double baseline = estimates[baseline_index].latency;
    if (!(baseline > 0.0)) {
        throw DomainError("normalized_latency: baseline latency must be > 0");
    }
    std::vector<double> out;
    out.reserve(estimates.size());
    for (const auto& est : estimates) {
        out.push_back(est.latency / baseline);
    }
    return out;
}

// Two-level memory model: expected cycles per access when a hit_rate share
// of accesses is served by the cache.
inline double avg_access_time(double hit_rate, double t_hit, double t_miss) {
    if (!(hit_rate >= 0.0 && hit_rate <= 1.0)) {
        throw DomainError("avg_access_time: hit_rate must be in [0, 1]");
    }
    if (!(t_hit > 0.0) || !(t_miss > 0.0)) {
        throw DomainError("avg_access_time: access times must be > 0");
    }
    return hit_rate * t_hit + (1.0 - hit_rate) * t_miss;
}

// Miss latency above which the DRAM term alone exceeds the compute term:
// the whole pipeline is then paced by the misses no matter how fast the
// arithmetic is.
inline double dram_dominance_threshold(double hit_rate, double t_compute) {
    if (!(hit_rate >= 0.0 && hit_rate <= 1.0)) {
        throw DomainError("dram_dominance_threshold: hit_rate must be in [0, 1]");
    }
    if (hit_rate == 1.0) {
        throw DomainError(
            "dram_dominance_threshold: all-hit workloads are never DRAM-dominated");
    }
    if (!(t_compute > 0.0)) {
        throw DomainError("dram_dominance_threshold: t_compute must be > 0");
    }
    return t_compute / (1.0 - hit_rate);
}

inline constexpr std::uint64_t kTrainableParamsDivisor = 6;

// Capacity-feasibility rule: an upper bound on trainable parameters is the
// device memory divided by the per-parameter training bytes. The divisor is
// approximate and therefore an argument, defaulting to 6.
inline std::uint64_t max_trainable_params(
    const HardwareSpec& hw, std::uint64_t divisor = kTrainableParamsDivisor) {
    if (divisor < 1) {
        throw DomainError("max_trainable_params: divisor must be >= 1");
    }
    return hw.mem_capacity / divisor;
}

// ---------------------------------------------------------------------------
// Hardware file loading. A device is a row in a CSV with header
//   name,year,peak_flops,dram_bw,mem_capacity,interconnect_bw
// or a standalone JSON object (or array of objects) with the same keys.
// ---------------------------------------------------------------------------
namespace detail {

inline std::uint64_t capacity_from_double(double v, const std::string& context) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw ParseError(context + ": mem_capacity must be a positive number");
    }
    return static_cast<std::uint64_t>(std::llround(v));
}

inline HardwareSpec hardware_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) {
        throw ParseError("hardware document must be a JSON object");
    }
    HardwareSpec hw;
    auto get_number = [&doc](const char* key) {
        auto it = doc.find(key);
        if (it == doc.end() || !it->is_number()) {
            throw ParseError(std::string("hardware document field '") + key +
                             "' missing or not a number");
        }
        return it->get<double>();
    };
    auto name_it = doc.find("name");
    if (name_it == doc.end() || !name_it->is_string()) {
        throw ParseError("hardware document field 'name' missing or not a string");
    }
    hw.name = name_it->get<std::string>();
    hw.year = get_number("year");
    hw.peak_flops = get_number("peak_flops");
    hw.dram_bw = get_number("dram_bw");
    hw.mem_capacity = capacity_from_double(get_number("mem_capacity"),
                                           "hardware document");
    if (auto it = doc.find("interconnect_bw");
        it != doc.end() && !it->is_null()) {
        if (!it->is_number()) {
            throw ParseError("hardware document field 'interconnect_bw' must be a number");
        }
        hw.interconnect_bw = it->get<double>();
    }
    return validated(hw);
}

}  // namespace detail

inline std::vector<HardwareSpec> load_hardware(const std::string& document) {
    // Sniff: JSON starts with '{' or '['; anything else is the CSV form.
    std::size_t first = document.find_first_not_of(" \t\r\n");
    if (first != std::string::npos &&
        (document[first] == '{' || document[first] == '[')) {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(document);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(std::string("hardware file is not valid JSON: ") +
                             e.what());
        }
        std::vector<HardwareSpec> out;
        if (doc.is_array()) {
            for (const auto& item : doc) {
                out.push_back(detail::hardware_from_json(item));
            }
        } else {
            out.push_back(detail::hardware_from_json(doc));
        }
        return out;
    }

    const csv::Table table = csv::parse(document);
    const std::size_t c_name = table.column("name");
    const std::size_t c_year = table.column("year");
    const std::size_t c_peak = table.column("peak_flops");
    const std::size_t c_bw = table.column("dram_bw");
    const std::size_t c_cap = table.column("mem_capacity");
    const bool has_ic = table.has_column("interconnect_bw");
    const std::size_t c_ic = has_ic ? table.column("interconnect_bw") : 0;

    std::vector<HardwareSpec> out;
    for (const auto& row : table.rows) {
        if (row.fields.size() < table.header.size()) {
            throw ParseError("hardware CSV line " +
                             std::to_string(row.line_number) +
                             ": expected " + std::to_string(table.header.size()) +
                             " fields");
        }
        HardwareSpec hw;
        hw.name = row.fields[c_name];
        hw.year = csv::parse_double(row.fields[c_year], row.line_number, "year");
        hw.peak_flops =
            csv::parse_double(row.fields[c_peak], row.line_number, "peak_flops");
        hw.dram_bw =
            csv::parse_double(row.fields[c_bw], row.line_number, "dram_bw");
        hw.mem_capacity = detail::capacity_from_double(
            csv::parse_double(row.fields[c_cap], row.line_number, "mem_capacity"),
            "hardware CSV line " + std::to_string(row.line_number));
        if (has_ic && !row.fields[c_ic].empty()) {
            hw.interconnect_bw = csv::parse_double(row.fields[c_ic],
                                                   row.line_number,
                                                   "interconnect_bw");
        }
        out.push_back(validated(hw));
    }
    return out;
}

}  // namespace memwall
