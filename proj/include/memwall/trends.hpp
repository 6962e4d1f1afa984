#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "memwall/csv.hpp"
#include "memwall/errors.hpp"

namespace memwall {

// ---------------------------------------------------------------------------
// Exponential growth-rate fitting: ordinary least squares of log2(value)
// against calendar year, reported as a multiplicative factor per 2 years.
// ---------------------------------------------------------------------------
struct TrendPoint {
    double year = 0.0;
    double value = 0.0;  // strictly positive
    std::string tag;     // optional row tag, e.g. "recsys"
};

struct TrendSeries {
    std::string metric_name;
    std::vector<TrendPoint> points;
};

struct TrendFit {
    double rate_per_2yr = 1.0;         // 2^(2 * slope)
    double slope_log2_per_year = 0.0;
    double intercept_log2 = 0.0;       // value of log2(v) at year 0
    double r_squared = 1.0;            // coefficient of determination in log space
};

inline TrendFit fit_rate(const TrendSeries& series) {
    const auto& pts = series.points;
    std::size_t distinct_years = 0;
    {
        std::vector<double> years;
        years.reserve(pts.size());
        for (const auto& p : pts) years.push_back(p.year);
        std::sort(years.begin(), years.end());
        distinct_years = std::unique(years.begin(), years.end()) - years.begin();
    }
    if (distinct_years < 2) {
        throw DomainError("fit_rate: series '" + series.metric_name +
                          "' needs at least 2 distinct years");
    }
    for (const auto& p : pts) {
        if (!(p.value > 0.0)) {
            throw ValidationError("fit_rate: series '" + series.metric_name +
                                  "' has a non-positive value at year " +
                                  std::to_string(p.year));
        }
    }

    const double n = static_cast<double>(pts.size());
    double mean_x = 0.0, mean_y = 0.0;
    for (const auto& p : pts) {
        mean_x += p.year;
        mean_y += std::log2(p.value);
    }
    mean_x /= n;
    mean_y /= n;

    double sxx = 0.0, sxy = 0.0;
    for (const auto& p : pts) {
        const double dx = p.year - mean_x;
        const double dy = std::log2(p.value) - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
    }
    TrendFit fit;
    fit.slope_log2_per_year = sxy / sxx;
    fit.intercept_log2 = mean_y - fit.slope_log2_per_year * mean_x;
    fit.rate_per_2yr = std::exp2(2.0 * fit.slope_log2_per_year);

    double ss_res = 0.0, ss_tot = 0.0;
    for (const auto& p : pts) {
        const double y = std::log2(p.value);
        const double predicted =
            fit.intercept_log2 + fit.slope_log2_per_year * p.year;
        ss_res += (y - predicted) * (y - predicted);
        ss_tot += (y - mean_y) * (y - mean_y);
    }
    // A constant series is fit exactly by the zero slope; call that r^2 = 1.
    fit.r_squared = (ss_tot > 0.0) ? 1.0 - ss_res / ss_tot : 1.0;
    fit.r_squared = std::clamp(fit.r_squared, 0.0, 1.0);
    return fit;
}

// Total growth factor over an arbitrary span of years.
inline double factor_over(const TrendFit& fit, double years) {
    return std::pow(fit.rate_per_2yr, years / 2.0);
}

// Per-series result of a database fit: degenerate series carry an error
// message instead of a fit and do not abort the batch.
struct HeadlineRate {
    std::string metric_name;
    std::optional<TrendFit> fit;
    std::string error;
};

inline std::vector<HeadlineRate> headline_rates(
    const std::vector<TrendSeries>& database) {
    if (database.empty()) {
        throw DomainError("headline_rates: database must be nonempty");
    }
    std::vector<HeadlineRate> out;
    out.reserve(database.size());
    for (const auto& series : database) {
        HeadlineRate row;
        row.metric_name = series.metric_name;
        try {
            row.fit = fit_rate(series);
        } catch (const Error& e) {
            row.error = e.what();
        }
        out.push_back(std::move(row));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Trend CSV: header `metric,year,value` plus an optional `tag` column.
// Series come back in first-appearance order.
// ---------------------------------------------------------------------------
inline std::vector<TrendSeries> load_trend_csv(const std::string& document) {
    const csv::Table table = csv::parse(document);
    const std::size_t c_metric = table.column("metric");
    const std::size_t c_year = table.column("year");
    const std::size_t c_value = table.column("value");
    const bool has_tag = table.has_column("tag");
    const std::size_t c_tag = has_tag ? table.column("tag") : 0;

    std::vector<TrendSeries> series;
    auto series_for = [&series](const std::string& metric) -> TrendSeries& {
        for (auto& s : series) {
            if (s.metric_name == metric) return s;
        }
        series.push_back({metric, {}});
        return series.back();
    };

    for (const auto& row : table.rows) {
        if (row.fields.size() < table.header.size()) {
            throw ParseError("trend CSV line " + std::to_string(row.line_number) +
                             ": expected " + std::to_string(table.header.size()) +
                             " fields, got " + std::to_string(row.fields.size()));
        }
        TrendPoint point;
        point.year = csv::parse_double(row.fields[c_year], row.line_number, "year");
        point.value =
            csv::parse_double(row.fields[c_value], row.line_number, "value");
        if (!(point.value > 0.0)) {
            throw ParseError("trend CSV line " + std::to_string(row.line_number) +
                             ": value must be strictly positive");
        }
        if (has_tag) point.tag = row.fields[c_tag];
        series_for(row.fields[c_metric]).points.push_back(std::move(point));
    }
    return series;
}

// Keeps points inside [from, to] (inclusive) and drops rows carrying
// exclude_tag. Series left empty disappear from the result.
inline std::vector<TrendSeries> filter_series(
    const std::vector<TrendSeries>& database,
    std::optional<double> from_year = std::nullopt,
    std::optional<double> to_year = std::nullopt,
    std::string_view exclude_tag = {}) {
    std::vector<TrendSeries> out;
    for (const auto& series : database) {
        TrendSeries kept;
        kept.metric_name = series.metric_name;
        for (const auto& p : series.points) {
            if (from_year && p.year < *from_year) continue;
            if (to_year && p.year > *to_year) continue;
            if (!exclude_tag.empty() && p.tag == exclude_tag) continue;
            kept.points.push_back(p);
        }
        if (!kept.points.empty()) out.push_back(std::move(kept));
    }
    return out;
}

inline const TrendSeries& find_series(const std::vector<TrendSeries>& database,
                                      std::string_view metric) {
    for (const auto& s : database) {
        if (s.metric_name == metric) return s;
    }
    throw LookupError("unknown metric '" + std::string(metric) + "'");
}

}  // namespace memwall
