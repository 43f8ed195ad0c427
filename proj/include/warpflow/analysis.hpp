#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "warpflow/dtw.hpp"
#include "warpflow/ingest.hpp"
#include "warpflow/preprocess.hpp"

namespace warpflow {

enum class SkipReason { DegenerateMobility, DegenerateCases, Filtered };

std::string_view to_string(SkipReason reason) noexcept;
std::optional<SkipReason> parse_skip_reason(std::string_view text);

/// Exactly one of dtw_distance / skipped is set.
struct RegionResult {
    std::string region_id;
    std::optional<double> dtw_distance;
    std::size_t n = 0;
    std::size_t lag_days = 0;
    std::optional<SkipReason> skipped;

    bool scored() const { return dtw_distance.has_value(); }
    bool operator==(const RegionResult&) const = default;
};

struct LagPoint {
    std::size_t lag_days = 0;
    std::size_t n = 0;  // aligned length, T - lag
    std::optional<double> dtw_distance;
    std::optional<SkipReason> skipped;

    /// Distance per aligned day; comparable across lags.
    std::optional<double> per_day() const {
        if (!dtw_distance || n == 0) return std::nullopt;
        return *dtw_distance / static_cast<double>(n);
    }
};

/// Longer lags leave shorter windows, so raw sums shrink with the lag alone.
/// The best lag is therefore chosen on distance per aligned day; ties go to
/// the smaller lag.
struct LagSweepResult {
    std::string region_id;
    std::vector<LagPoint> points;  // one per lag, ascending
    std::optional<std::size_t> best_lag;
    std::optional<double> best_distance;  // raw distance at best_lag
    std::optional<double> best_per_day;
};

struct ClassBreaks {
    double inner = 0.5;
    double outer = 1.5;
};

struct ClassifiedResult {
    std::string region_id;
    double dtw_distance = 0.0;
    double z_score = 0.0;
    int class_index = 0;  // 0 (most similar) .. 4 (least similar)
    std::string class_label;
};

struct DiagnosticsReport {
    std::size_t scored_regions = 0;
    double r_population = 0.0;
    double r_density = 0.0;

    static constexpr double kWeakBelow = 0.3;
    static bool weak(double r) { return r > -kWeakBelow && r < kWeakBelow; }
};

struct RunOptions {
    dtw::Band band;
    std::size_t workers = 1;
};

namespace analysis {

/// Per-dataset state shared by every region task: the validated dataset, the
/// configuration, and each region's aggregated mobility series.
class Study {
public:
    Study(const Dataset& dataset, AnalysisConfig config, dtw::Band band = {});

    const Dataset& dataset() const { return *dataset_; }
    const AnalysisConfig& config() const { return config_; }
    const DailySeries& mobility(const std::string& region_id) const;

    /// Runs one region at the configured lag; degenerate windows become a
    /// skipped result instead of an exception.
    RegionResult run_region(const std::string& region_id) const;
    RegionResult run_region(const std::string& region_id, std::size_t lag_days) const;

    /// Throws LagTooLarge if lag_max >= series length or lag_min > lag_max.
    LagSweepResult lag_sweep(const std::string& region_id, std::size_t lag_min, std::size_t lag_max) const;

private:
    const DailySeries& cases(const std::string& region_id) const;

    const Dataset* dataset_;
    AnalysisConfig config_;
    dtw::Band band_;
    std::map<std::string, DailySeries> mobility_;
};

RegionResult run_region(const std::string& region_id, const Dataset& dataset, const AnalysisConfig& config,
                        dtw::Band band = {});

/// One result per region surviving filter_regions, ascending by id.
/// Output does not depend on options.workers.
std::vector<RegionResult> run_all(const Dataset& dataset, const AnalysisConfig& config, const RunOptions& options = {});
std::vector<RegionResult> run_regions(const Study& study, std::span<const std::string> region_ids,
                                      std::size_t workers);

LagSweepResult lag_sweep(const std::string& region_id, const Dataset& dataset, const AnalysisConfig& config,
                         std::size_t lag_min, std::size_t lag_max, dtw::Band band = {});
std::vector<LagSweepResult> lag_sweep_regions(const Study& study, std::span<const std::string> region_ids,
                                              std::size_t lag_min, std::size_t lag_max, std::size_t workers);

/// Sample Pearson product-moment correlation. Throws LengthMismatch,
/// ZeroVariance (also for fewer than two points).
double pearson(std::span<const double> xs, std::span<const double> ys);

/// Pearson of scored DTW distances against population and population density.
DiagnosticsReport run_diagnostics(std::span<const RegionResult> results, const RegionTable& regions);

/// z = (d - mean) / sample_std over scored regions, bucketed by |z| with
/// inclusive upper breaks. Throws ZeroSpread when all distances are equal.
std::vector<ClassifiedResult> classify_std(std::span<const RegionResult> results, ClassBreaks breaks = {});

/// Class index and label for one z-score.
std::pair<int, std::string> classify_z(double z, ClassBreaks breaks = {});

}  // namespace analysis
}  // namespace warpflow
