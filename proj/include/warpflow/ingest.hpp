#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "warpflow/date.hpp"
#include "warpflow/series.hpp"

namespace warpflow {

struct RegionMeta {
    std::string region_id;
    std::string name;
    std::int64_t population = 0;
    double land_area = 0.0;  // square miles
    bool is_metro = false;

    double density() const { return static_cast<double>(population) / land_area; }

    bool operator==(const RegionMeta&) const = default;
};

using RegionTable = std::map<std::string, RegionMeta>;

struct FlowRecord {
    Date date;
    std::string origin;
    std::string destination;
    std::int64_t devices_od = 0;
    std::int64_t devices_o = 0;

    auto operator<=>(const FlowRecord&) const = default;
};

struct CaseRecord {
    Date date;
    std::string region_id;
    double new_cases = 0.0;
};

using CaseTable = std::map<std::string, DailySeries>;

/// How gaps in a region's case series are handled.
enum class FillPolicy { Error, Zero, Previous };

FillPolicy parse_fill_policy(std::string_view text);
std::string_view to_string(FillPolicy policy) noexcept;

struct Dataset {
    RegionTable regions;
    std::vector<FlowRecord> flows;  // canonical order
    CaseTable cases;
    DateRange date_range;

    bool operator==(const Dataset&) const = default;
};

namespace ingest {

inline constexpr std::string_view kRegionsHeader = "region_id,name,population,land_area_sqmi,is_metro";
inline constexpr std::string_view kFlowsHeader = "date,origin,destination,devices_od,devices_origin_total";
inline constexpr std::string_view kCasesHeader = "date,region_id,new_cases";

RegionTable parse_regions(const std::filesystem::path& path);
RegionTable parse_regions(std::istream& in, const std::string& source = "regions.csv");

/// Flow rows come back sorted canonically (date, origin, destination, counts).
std::vector<FlowRecord> parse_flows(const std::filesystem::path& path, const RegionTable& regions);
std::vector<FlowRecord> parse_flows(std::istream& in, const RegionTable& regions,
                                    const std::string& source = "flows.csv");

/// Rows dated outside `range` are dropped. Regions with no rows in range get
/// no series; regions with partial coverage are completed per `policy`.
CaseTable parse_cases(const std::filesystem::path& path, const RegionTable& regions, DateRange range,
                      FillPolicy policy = FillPolicy::Error);
CaseTable parse_cases(std::istream& in, const RegionTable& regions, DateRange range,
                      FillPolicy policy = FillPolicy::Error, const std::string& source = "cases.csv");

struct InputPaths {
    std::filesystem::path regions;
    std::filesystem::path flows;
    std::filesystem::path cases;
};

/// Parses all three tables and restricts flows to `range`.
Dataset load_dataset(const InputPaths& paths, DateRange range, FillPolicy policy = FillPolicy::Error);

void write_regions(std::ostream& out, const RegionTable& regions);
void write_flows(std::ostream& out, const std::vector<FlowRecord>& flows);
void write_cases(std::ostream& out, const CaseTable& cases);

}  // namespace ingest
}  // namespace warpflow
