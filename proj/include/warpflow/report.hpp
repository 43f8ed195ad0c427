#pragma once

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "warpflow/analysis.hpp"
#include "warpflow/preprocess.hpp"

namespace warpflow::report {

inline constexpr std::string_view kResultsHeader = "region_id,dtw_distance,n,lag_days,skipped_reason";
inline constexpr std::string_view kClassifiedHeader = "region_id,dtw_distance,z_score,class_label";
inline constexpr std::string_view kLagSweepHeader = "region_id,lag_days,dtw_distance";
inline constexpr std::string_view kLagBestHeader = "region_id,best_lag,dtw_distance,dtw_per_day";
inline constexpr std::string_view kFilterHeader = "stage,region_id,reason";
inline constexpr std::string_view kMobilityHeader = "region_id,date,mobility";

void write_results(std::ostream& out, std::span<const RegionResult> results);
std::vector<RegionResult> read_results(std::istream& in, const std::string& source = "results.csv");

void write_classified(std::ostream& out, std::span<const ClassifiedResult> classified);
void write_lag_sweep(std::ostream& out, std::span<const LagSweepResult> sweeps);
void write_lag_best(std::ostream& out, std::span<const LagSweepResult> sweeps);
void write_filter_report(std::ostream& out, const FilterReport& report);
/// Human-readable stage counts, one `key=value` per line.
void write_filter_summary(std::ostream& out, const FilterReport& report);
void write_diagnostics(std::ostream& out, const DiagnosticsReport& diagnostics);
void write_mobility(std::ostream& out, const std::map<std::string, DailySeries>& mobility);

}  // namespace warpflow::report
