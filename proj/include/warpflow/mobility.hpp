#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "warpflow/ingest.hpp"
#include "warpflow/series.hpp"

namespace warpflow::mobility {

/// Persons moving origin -> destination, scaled up from the device panel:
/// devices_od * population_o / devices_o. Throws ZeroDevices when devices_o is 0.
double estimate_flow(std::int64_t devices_od, std::int64_t population_o, std::int64_t devices_o);

/// Daily within + inflow mobility of `target`: for each day, the sum of
/// estimate_flow over every record whose destination is `target`. Days without
/// records are 0. The per-day sum is independent of record order.
DailySeries aggregate_region_mobility(std::span<const FlowRecord> flows, const RegionTable& regions,
                                      const std::string& target, DateRange range);

/// aggregate_region_mobility for every region in the table, in one pass.
std::map<std::string, DailySeries> aggregate_all_mobility(std::span<const FlowRecord> flows,
                                                          const RegionTable& regions, DateRange range);

/// Trailing moving average; the first window-1 entries average over the
/// days available so far. Output length equals input length.
std::vector<double> rolling_mean(std::span<const double> values, std::size_t window);
DailySeries rolling_mean(const DailySeries& series, std::size_t window);

}  // namespace warpflow::mobility
