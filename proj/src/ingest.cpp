#include "warpflow/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <spdlog/spdlog.h>

#include "warpflow/csv.hpp"
#include "warpflow/error.hpp"

namespace warpflow {

FillPolicy parse_fill_policy(std::string_view text) {
    if (text == "error" || text == "none") return FillPolicy::Error;
    if (text == "zero") return FillPolicy::Zero;
    if (text == "previous") return FillPolicy::Previous;
    throw Error(ErrorCode::TypeMismatch, fmt::format("fill policy must be error|zero|previous, got '{}'", text));
}

std::string_view to_string(FillPolicy policy) noexcept {
    switch (policy) {
        case FillPolicy::Error: return "error";
        case FillPolicy::Zero: return "zero";
        case FillPolicy::Previous: return "previous";
    }
    return "error";
}

namespace ingest {

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, fmt::format("cannot open input file '{}'", path.string()));
    return in;
}

void warn_ignored(const csv::Reader& reader) {
    if (!reader.ignored_columns().empty()) {
        spdlog::warn("{}: ignoring unknown columns: {}", reader.source(), fmt::join(reader.ignored_columns(), ", "));
    }
}

Date parse_date_field(const std::string& text, const csv::Reader& reader) {
    try {
        return Date::parse(text);
    } catch (const Error& e) {
        throw Error(ErrorCode::BadDate, fmt::format("{}: {}", reader.where(), e.what()));
    }
}

const RegionMeta& require_region(const RegionTable& regions, const std::string& id, const csv::Reader& reader) {
    auto it = regions.find(id);
    if (it == regions.end()) {
        throw Error(ErrorCode::UnknownRegion, fmt::format("{}: region '{}' is not in the region table", reader.where(), id));
    }
    return it->second;
}

}  // namespace

RegionTable parse_regions(const std::filesystem::path& path) {
    auto in = open_input(path);
    return parse_regions(in, path.string());
}

RegionTable parse_regions(std::istream& in, const std::string& source) {
    enum { kId, kName, kPopulation, kArea, kMetro };
    csv::Reader reader(in, source, {"region_id", "name", "population", "land_area_sqmi", "is_metro"});
    warn_ignored(reader);

    RegionTable regions;
    while (reader.next()) {
        RegionMeta meta;
        meta.region_id = reader.field(kId);
        meta.name = reader.field(kName);
        if (meta.region_id.empty()) {
            throw Error(ErrorCode::MalformedRow, fmt::format("{}: empty region_id", reader.where()));
        }
        meta.population = csv::parse_integer(reader.field(kPopulation), reader.where(), "population");
        if (meta.population < 1) {
            throw Error(ErrorCode::NonPositivePopulation,
                        fmt::format("{}: region '{}' has population {}", reader.where(), meta.region_id, meta.population));
        }
        meta.land_area = csv::parse_double(reader.field(kArea), reader.where(), "land_area_sqmi");
        if (!(meta.land_area > 0.0) || !std::isfinite(meta.land_area)) {
            throw Error(ErrorCode::NonPositiveArea,
                        fmt::format("{}: region '{}' has land area {}", reader.where(), meta.region_id, reader.field(kArea)));
        }
        meta.is_metro = csv::parse_bool(reader.field(kMetro), reader.where(), "is_metro");
        const std::string id = meta.region_id;
        if (!regions.emplace(id, std::move(meta)).second) {
            throw Error(ErrorCode::DuplicateRegion, fmt::format("{}: duplicate region_id '{}'", reader.where(), id));
        }
    }
    return regions;
}

std::vector<FlowRecord> parse_flows(const std::filesystem::path& path, const RegionTable& regions) {
    auto in = open_input(path);
    return parse_flows(in, regions, path.string());
}

std::vector<FlowRecord> parse_flows(std::istream& in, const RegionTable& regions, const std::string& source) {
    enum { kDate, kOrigin, kDestination, kDevicesOd, kDevicesO };
    csv::Reader reader(in, source, {"date", "origin", "destination", "devices_od", "devices_origin_total"});
    warn_ignored(reader);

    std::vector<FlowRecord> flows;
    while (reader.next()) {
        FlowRecord rec;
        rec.date = parse_date_field(reader.field(kDate), reader);
        rec.origin = require_region(regions, reader.field(kOrigin), reader).region_id;
        rec.destination = require_region(regions, reader.field(kDestination), reader).region_id;
        rec.devices_od = csv::parse_integer(reader.field(kDevicesOd), reader.where(), "devices_od");
        rec.devices_o = csv::parse_integer(reader.field(kDevicesO), reader.where(), "devices_origin_total");
        if (rec.devices_od < 0 || rec.devices_o < 0) {
            throw Error(ErrorCode::NegativeCount, fmt::format("{}: negative device count", reader.where()));
        }
        if (rec.devices_o == 0) {
            throw Error(ErrorCode::ZeroDevices,
                        fmt::format("{}: devices_origin_total is 0 for origin '{}'", reader.where(), rec.origin));
        }
        if (rec.devices_od > rec.devices_o) {
            throw Error(ErrorCode::DevicesExceedTotal,
                        fmt::format("{}: devices_od {} exceeds devices_origin_total {}", reader.where(), rec.devices_od,
                                    rec.devices_o));
        }
        flows.push_back(std::move(rec));
    }
    std::sort(flows.begin(), flows.end());
    return flows;
}

CaseTable parse_cases(const std::filesystem::path& path, const RegionTable& regions, DateRange range,
                      FillPolicy policy) {
    auto in = open_input(path);
    return parse_cases(in, regions, range, policy, path.string());
}

CaseTable parse_cases(std::istream& in, const RegionTable& regions, DateRange range, FillPolicy policy,
                      const std::string& source) {
    enum { kDate, kRegion, kCases };
    csv::Reader reader(in, source, {"date", "region_id", "new_cases"});
    warn_ignored(reader);

    const std::size_t n_days = range.days();
    // Per region: value slot per day plus a presence mask.
    std::map<std::string, std::pair<std::vector<double>, std::vector<bool>>> grid;
    std::size_t dropped = 0;
    while (reader.next()) {
        const Date date = parse_date_field(reader.field(kDate), reader);
        const std::string& id = require_region(regions, reader.field(kRegion), reader).region_id;
        const double value = csv::parse_double(reader.field(kCases), reader.where(), "new_cases");
        if (!std::isfinite(value) || value < 0.0) {
            throw Error(ErrorCode::NegativeCases,
                        fmt::format("{}: new_cases {} for region '{}' is negative or not finite", reader.where(),
                                    reader.field(kCases), id));
        }
        if (!range.contains(date)) {
            ++dropped;
            continue;
        }
        auto& [values, present] = grid[id];
        if (values.empty()) {
            values.assign(n_days, 0.0);
            present.assign(n_days, false);
        }
        const std::size_t idx = range.index_of(date);
        if (present[idx]) {
            throw Error(ErrorCode::DuplicateDate,
                        fmt::format("{}: second row for region '{}' on {}", reader.where(), id, date.iso()));
        }
        values[idx] = value;
        present[idx] = true;
    }
    if (dropped > 0) {
        spdlog::info("{}: {} rows outside {}..{} ignored", source, dropped, range.first.iso(), range.last.iso());
    }

    CaseTable cases;
    for (auto& [id, slot] : grid) {
        auto& [values, present] = slot;
        std::vector<std::string> missing;
        for (std::size_t i = 0; i < n_days; ++i) {
            if (present[i]) continue;
            switch (policy) {
                case FillPolicy::Error:
                    missing.push_back((range.first + static_cast<long>(i)).iso());
                    break;
                case FillPolicy::Zero:
                    values[i] = 0.0;
                    break;
                case FillPolicy::Previous:
                    if (i == 0) {
                        missing.push_back(range.first.iso());
                    } else {
                        values[i] = values[i - 1];
                    }
                    break;
            }
        }
        if (!missing.empty()) {
            throw Error(ErrorCode::MissingDates,
                        fmt::format("{}: region '{}' has no case value for {}", source, id, fmt::join(missing, ", ")));
        }
        cases.emplace(id, DailySeries{id, range.first, std::move(values)});
    }
    return cases;
}

Dataset load_dataset(const InputPaths& paths, DateRange range, FillPolicy policy) {
    for (const auto* p : {&paths.regions, &paths.flows, &paths.cases}) {
        if (!std::filesystem::exists(*p)) {
            throw Error(ErrorCode::Io, fmt::format("input file '{}' does not exist", p->string()));
        }
    }
    Dataset ds;
    ds.date_range = range;
    ds.regions = parse_regions(paths.regions);
    auto flows = parse_flows(paths.flows, ds.regions);
    const auto before = flows.size();
    std::erase_if(flows, [&](const FlowRecord& f) { return !range.contains(f.date); });
    if (flows.size() != before) {
        spdlog::info("{}: {} rows outside {}..{} ignored", paths.flows.string(), before - flows.size(),
                     range.first.iso(), range.last.iso());
    }
    ds.flows = std::move(flows);
    ds.cases = parse_cases(paths.cases, ds.regions, range, policy);
    return ds;
}

void write_regions(std::ostream& out, const RegionTable& regions) {
    out << kRegionsHeader << '\n';
    for (const auto& [id, r] : regions) {
        out << csv::quote(r.region_id) << ',' << csv::quote(r.name) << ',' << r.population << ','
            << csv::format_number(r.land_area) << ',' << (r.is_metro ? "true" : "false") << '\n';
    }
}

void write_flows(std::ostream& out, const std::vector<FlowRecord>& flows) {
    out << kFlowsHeader << '\n';
    for (const auto& f : flows) {
        out << f.date.iso() << ',' << csv::quote(f.origin) << ',' << csv::quote(f.destination) << ',' << f.devices_od
            << ',' << f.devices_o << '\n';
    }
}

void write_cases(std::ostream& out, const CaseTable& cases) {
    out << kCasesHeader << '\n';
    for (const auto& [id, series] : cases) {
        for (std::size_t i = 0; i < series.values.size(); ++i) {
            out << (series.start + static_cast<long>(i)).iso() << ',' << csv::quote(id) << ','
                << csv::format_number(series.values[i]) << '\n';
        }
    }
}

}  // namespace ingest
}  // namespace warpflow
