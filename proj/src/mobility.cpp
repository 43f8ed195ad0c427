#include "warpflow/mobility.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <utility>

#include <fmt/format.h>

#include "warpflow/error.hpp"

namespace warpflow::mobility {

namespace {

// Records sharing a day, origin and origin panel size are merged on the integer
// device counts before scaling, so splitting a record never changes the result.
// Scaled terms are then summed in sorted order, independent of record order.
class DayAccumulator {
public:
    void add(const FlowRecord& f) {
        if (f.devices_od < 0 || f.devices_o < 0) {
            throw Error(ErrorCode::NegativeCount, "device counts must be non-negative");
        }
        if (f.devices_o == 0) throw Error(ErrorCode::ZeroDevices, "devices in origin is 0; flow cannot be scaled");
        devices_[{f.origin, f.devices_o}] += f.devices_od;
    }

    double total(const RegionTable& regions) const {
        std::vector<double> terms;
        terms.reserve(devices_.size());
        for (const auto& [key, devices_od] : devices_) {
            auto it = regions.find(key.first);
            if (it == regions.end()) {
                throw Error(ErrorCode::UnknownRegion,
                            fmt::format("flow origin '{}' is not in the region table", key.first));
            }
            terms.push_back(estimate_flow(devices_od, it->second.population, key.second));
        }
        std::sort(terms.begin(), terms.end());
        return std::accumulate(terms.begin(), terms.end(), 0.0);
    }

private:
    std::map<std::pair<std::string, std::int64_t>, std::int64_t> devices_;
};

DailySeries totals(const std::string& id, DateRange range, const std::vector<DayAccumulator>& days,
                   const RegionTable& regions) {
    DailySeries out{id, range.first, std::vector<double>(days.size(), 0.0)};
    for (std::size_t d = 0; d < days.size(); ++d) out.values[d] = days[d].total(regions);
    return out;
}

}  // namespace

double estimate_flow(std::int64_t devices_od, std::int64_t population_o, std::int64_t devices_o) {
    if (devices_o == 0) throw Error(ErrorCode::ZeroDevices, "devices in origin is 0; flow cannot be scaled");
    if (devices_od < 0 || devices_o < 0) throw Error(ErrorCode::NegativeCount, "device counts must be non-negative");
    if (population_o < 1) throw Error(ErrorCode::NonPositivePopulation, "origin population must be positive");
    return static_cast<double>(devices_od) * static_cast<double>(population_o) / static_cast<double>(devices_o);
}

DailySeries aggregate_region_mobility(std::span<const FlowRecord> flows, const RegionTable& regions,
                                      const std::string& target, DateRange range) {
    if (!regions.contains(target)) {
        throw Error(ErrorCode::UnknownRegion, fmt::format("region '{}' is not in the region table", target));
    }
    std::vector<DayAccumulator> days(range.days());
    for (const auto& f : flows) {
        if (f.destination == target && range.contains(f.date)) days[range.index_of(f.date)].add(f);
    }
    return totals(target, range, days, regions);
}

std::map<std::string, DailySeries> aggregate_all_mobility(std::span<const FlowRecord> flows,
                                                          const RegionTable& regions, DateRange range) {
    std::map<std::string, std::vector<DayAccumulator>> per_region;
    for (const auto& [id, meta] : regions) per_region[id].resize(range.days());
    for (const auto& f : flows) {
        if (!range.contains(f.date)) continue;
        auto it = per_region.find(f.destination);
        if (it == per_region.end()) {
            throw Error(ErrorCode::UnknownRegion,
                        fmt::format("flow destination '{}' is not in the region table", f.destination));
        }
        it->second[range.index_of(f.date)].add(f);
    }
    std::map<std::string, DailySeries> out;
    for (const auto& [id, days] : per_region) out.emplace(id, totals(id, range, days, regions));
    return out;
}

std::vector<double> rolling_mean(std::span<const double> values, std::size_t window) {
    if (window == 0) throw Error(ErrorCode::WindowTooLarge, "smoothing window must be at least 1");
    if (window > values.size()) {
        throw Error(ErrorCode::WindowTooLarge,
                    fmt::format("smoothing window {} exceeds series length {}", window, values.size()));
    }
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const std::size_t lo = i + 1 >= window ? i + 1 - window : 0;
        const auto slice = values.subspan(lo, i - lo + 1);
        const double mean = std::accumulate(slice.begin(), slice.end(), 0.0) / static_cast<double>(slice.size());
        // A mean lies within its window's range; clamp away rounding drift.
        const auto [mn, mx] = std::minmax_element(slice.begin(), slice.end());
        out[i] = std::clamp(mean, *mn, *mx);
    }
    return out;
}

DailySeries rolling_mean(const DailySeries& series, std::size_t window) {
    return DailySeries{series.region_id, series.start, rolling_mean(std::span<const double>(series.values), window)};
}

}  // namespace warpflow::mobility
