#include "warpflow/preprocess.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "warpflow/csv.hpp"
#include "warpflow/mobility.hpp"

namespace warpflow {

CaseFilter CaseFilter::parse(std::string_view text) {
    if (text == "median") return median();
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
        throw Error(ErrorCode::TypeMismatch, fmt::format("min case filter must be 'median' or a number, got '{}'", text));
    }
    return fixed(value);
}

std::string CaseFilter::str() const { return threshold ? csv::format_number(*threshold) : "median"; }

namespace preprocess {

double median(std::vector<double> values) {
    if (values.empty()) throw Error(ErrorCode::EmptySeries, "median of an empty set");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return values[n / 2 - 1] + (values[n / 2] - values[n / 2 - 1]) / 2.0;
}

FilterOutcome filter_regions(const RegionTable& regions, const CaseTable& cases, const AnalysisConfig& config) {
    FilterOutcome out;
    FilterReport& rep = out.report;
    rep.total = regions.size();
    rep.threshold_is_median = !config.min_case_filter.threshold.has_value();

    std::vector<std::pair<std::string, double>> candidates;
    for (const auto& [id, meta] : regions) {
        if (config.metro_only && !meta.is_metro) {
            ++rep.dropped_non_metro;
            rep.entries.push_back({"metro", id, "non_metro"});
            continue;
        }
        auto it = cases.find(id);
        if (it == cases.end() || it->second.values.empty()) {
            ++rep.dropped_no_cases;
            rep.entries.push_back({"cases", id, "no_case_series"});
            continue;
        }
        const auto& v = it->second.values;
        candidates.emplace_back(id, std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()));
    }
    rep.candidates = candidates.size();

    if (!candidates.empty()) {
        if (rep.threshold_is_median) {
            std::vector<double> means;
            means.reserve(candidates.size());
            for (const auto& c : candidates) means.push_back(c.second);
            rep.threshold = median(std::move(means));
        } else {
            rep.threshold = *config.min_case_filter.threshold;
        }
    }
    const std::string stage = rep.threshold_is_median ? "median" : "threshold";
    for (const auto& [id, mean] : candidates) {
        if (mean < rep.threshold) {
            ++rep.dropped_below_threshold;
            rep.entries.push_back({stage, id, fmt::format("below_{} mean={}", stage, csv::format_number(mean))});
        } else {
            out.kept.push_back(id);
            rep.entries.push_back({"kept", id, fmt::format("mean={}", csv::format_number(mean))});
        }
    }
    rep.kept = out.kept.size();
    std::sort(rep.entries.begin(), rep.entries.end(),
              [](const FilterEntry& a, const FilterEntry& b) { return a.region_id < b.region_id; });

    if (out.kept.empty()) {
        throw Error(ErrorCode::EmptyAfterFilter,
                    fmt::format("no region survives filtering ({} total, {} non-metro, {} without cases, {} below {})",
                                rep.total, rep.dropped_non_metro, rep.dropped_no_cases, rep.dropped_below_threshold,
                                stage));
    }
    return out;
}

std::pair<DailySeries, DailySeries> apply_lag(const DailySeries& mobility, const DailySeries& cases,
                                              std::size_t lag_days) {
    if (mobility.size() != cases.size() || mobility.start != cases.start) {
        throw Error(ErrorCode::LengthMismatch,
                    fmt::format("region '{}': mobility and cases are not on the same date grid", mobility.region_id));
    }
    const std::size_t total = mobility.size();
    if (lag_days >= total) {
        throw Error(ErrorCode::LagTooLarge,
                    fmt::format("lag of {} days needs more than {} days of data", lag_days, total));
    }
    const auto len = static_cast<std::ptrdiff_t>(total - lag_days);
    const auto lag = static_cast<std::ptrdiff_t>(lag_days);
    DailySeries m{mobility.region_id, mobility.start, {mobility.values.begin(), mobility.values.begin() + len}};
    DailySeries c{cases.region_id, cases.start + static_cast<long>(lag_days),
                  {cases.values.begin() + lag, cases.values.begin() + lag + len}};
    return {std::move(m), std::move(c)};
}

std::vector<double> min_max_normalize(std::span<const double> values) {
    if (values.size() < 2) {
        throw Error(ErrorCode::DegenerateSeries, "normalization needs at least two values");
    }
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    const double lo = *mn;
    const double range = *mx - lo;
    if (!(range > 0.0)) throw Error(ErrorCode::DegenerateSeries, "series is constant");
    std::vector<double> out(values.size());
    std::transform(values.begin(), values.end(), out.begin(), [&](double x) { return (x - lo) / range; });
    return out;
}

AlignedPair build_aligned_pair(const DailySeries& mobility, const DailySeries& cases, const AnalysisConfig& config) {
    const DailySeries smooth_mobility = mobility::rolling_mean(mobility, config.smooth_window);
    const DailySeries smooth_cases = config.resmooth_cases ? mobility::rolling_mean(cases, config.smooth_window) : cases;
    auto [m, c] = apply_lag(smooth_mobility, smooth_cases, config.lag_days);

    AlignedPair pair;
    pair.region_id = mobility.region_id;
    pair.lag_days = config.lag_days;
    pair.n = m.size();
    try {
        pair.mobility_norm = min_max_normalize(m.values);
    } catch (const Error& e) {
        throw DegenerateSeriesError(SeriesSide::Mobility,
                                    fmt::format("region '{}': mobility window: {}", mobility.region_id, e.what()));
    }
    try {
        pair.cases_norm = min_max_normalize(c.values);
    } catch (const Error& e) {
        throw DegenerateSeriesError(SeriesSide::Cases,
                                    fmt::format("region '{}': cases window: {}", mobility.region_id, e.what()));
    }
    return pair;
}

}  // namespace preprocess
}  // namespace warpflow
