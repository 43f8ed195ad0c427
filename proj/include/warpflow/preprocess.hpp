#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "warpflow/error.hpp"
#include "warpflow/ingest.hpp"
#include "warpflow/series.hpp"

namespace warpflow {

/// Region-selection threshold: the median of per-region mean cases, or a fixed value.
struct CaseFilter {
    std::optional<double> threshold;  // empty = median

    static CaseFilter median() { return {}; }
    static CaseFilter fixed(double value) { return {value}; }
    /// "median" or a decimal number.
    static CaseFilter parse(std::string_view text);
    std::string str() const;

    bool operator==(const CaseFilter&) const = default;
};

struct AnalysisConfig {
    std::size_t lag_days = 7;
    std::size_t smooth_window = 7;
    DateRange date_range = DateRange{Date::from_ymd(2020, 11, 30), Date::from_ymd(2021, 1, 24)};
    CaseFilter min_case_filter = CaseFilter::median();
    bool metro_only = true;
    bool resmooth_cases = false;
};

/// Two equal-length [0,1] series ready for DTW.
struct AlignedPair {
    std::string region_id;
    std::vector<double> mobility_norm;
    std::vector<double> cases_norm;
    std::size_t n = 0;
    std::size_t lag_days = 0;
};

enum class SeriesSide { Mobility, Cases };

/// DegenerateSeries raised from pair assembly, tagged with the offending side.
class DegenerateSeriesError : public Error {
public:
    DegenerateSeriesError(SeriesSide side, const std::string& message)
        : Error(ErrorCode::DegenerateSeries, message), side_(side) {}
    SeriesSide side() const noexcept { return side_; }

private:
    SeriesSide side_;
};

struct FilterEntry {
    std::string stage;  // "metro", "cases", "median" / "threshold", "kept"
    std::string region_id;
    std::string reason;
};

struct FilterReport {
    std::size_t total = 0;
    std::size_t dropped_non_metro = 0;
    std::size_t dropped_no_cases = 0;
    std::size_t candidates = 0;  // regions the mean-cases threshold was applied to
    std::size_t dropped_below_threshold = 0;
    std::size_t kept = 0;
    double threshold = 0.0;  // median of candidate means, or the fixed value
    bool threshold_is_median = true;
    std::vector<FilterEntry> entries;  // region_id ascending
};

struct FilterOutcome {
    std::vector<std::string> kept;  // ascending
    FilterReport report;
};

namespace preprocess {

/// Drops non-metro regions (when configured), regions with no case series,
/// then regions whose mean daily cases fall strictly below the median of the
/// remaining regions' means (or below a fixed threshold). Ties are kept.
/// Throws EmptyAfterFilter when nothing survives.
FilterOutcome filter_regions(const RegionTable& regions, const CaseTable& cases, const AnalysisConfig& config);

/// Midpoint median; `values` must be non-empty.
double median(std::vector<double> values);

/// Pairs mobility day t with cases day t+lag. Both windows have length T-lag.
std::pair<DailySeries, DailySeries> apply_lag(const DailySeries& mobility, const DailySeries& cases,
                                              std::size_t lag_days);

/// (x - min) / (max - min). Throws DegenerateSeries when the range is zero
/// or fewer than two values are given.
std::vector<double> min_max_normalize(std::span<const double> values);

/// smooth mobility -> (optionally smooth cases) -> lag -> normalize each window.
AlignedPair build_aligned_pair(const DailySeries& mobility, const DailySeries& cases, const AnalysisConfig& config);

}  // namespace preprocess
}  // namespace warpflow
