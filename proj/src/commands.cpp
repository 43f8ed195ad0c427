#include "warpflow/commands.hpp"

#include <algorithm>
#include <fstream>
#include <span>
#include <sstream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "warpflow/analysis.hpp"
#include "warpflow/error.hpp"
#include "warpflow/parallel.hpp"
#include "warpflow/report.hpp"
#include "warpflow/synth.hpp"

namespace warpflow::cli {

namespace {

std::ofstream create(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, fmt::format("cannot write '{}'", path.string()));
    return out;
}

template <typename Writer>
void write_file(const std::filesystem::path& path, Writer&& writer) {
    auto out = create(path);
    writer(out);
    if (!out) throw Error(ErrorCode::Io, fmt::format("failed writing '{}'", path.string()));
}

std::size_t effective_workers(const RunConfig& c) { return c.workers == 0 ? default_workers() : c.workers; }

template <typename Body>
int guarded(std::string_view command, Body&& body) {
    try {
        return body();
    } catch (const Error& e) {
        const int code = exit_code_for(e.code());
        spdlog::error("{}: {} ({})", command, e.what(), to_string(e.code()));
        return code;
    } catch (const std::exception& e) {
        spdlog::error("{}: internal error: {}", command, e.what());
        return kInternalError;
    }
}

struct Prepared {
    Dataset dataset;
    FilterOutcome filtered;
};

Prepared prepare(const RunConfig& config) {
    validate(config);
    spdlog::info("loading {}, {}, {}", config.inputs.regions.string(), config.inputs.flows.string(),
                 config.inputs.cases.string());
    Prepared p;
    p.dataset = ingest::load_dataset(config.inputs, config.analysis.date_range, config.fill_missing);
    spdlog::info("{} regions, {} flow rows, {} case series over {} days", p.dataset.regions.size(),
                 p.dataset.flows.size(), p.dataset.cases.size(), p.dataset.date_range.days());
    p.filtered = preprocess::filter_regions(p.dataset.regions, p.dataset.cases, config.analysis);
    const auto& r = p.filtered.report;
    spdlog::info("filter: {} total, {} non-metro, {} without cases, {} below threshold {}, {} kept", r.total,
                 r.dropped_non_metro, r.dropped_no_cases, r.dropped_below_threshold, r.threshold, r.kept);
    return p;
}

std::string log_text(const RunConfig& config, const FilterReport& report, std::string_view command) {
    std::ostringstream out;
    out << "# warpflow " << command << " effective configuration\n" << format_config(config);
    std::ostringstream summary;
    report::write_filter_summary(summary, report);
    out << "# filter summary\n";
    std::istringstream lines(summary.str());
    for (std::string line; std::getline(lines, line);) out << "# " << line << '\n';
    return out.str();
}

struct Summary {
    std::vector<ClassifiedResult> classified;
    std::string diagnostics;
};

// Classification and diagnostics need spread in the distances; without it both
// outputs degrade to an explanation instead of failing the whole command.
Summary summarize(std::span<const RegionResult> results, const RegionTable& regions, std::string_view command) {
    Summary s;
    try {
        s.classified = analysis::classify_std(results);
        std::ostringstream d;
        report::write_diagnostics(d, analysis::run_diagnostics(results, regions));
        s.diagnostics = d.str();
    } catch (const Error& e) {
        if (e.code() != ErrorCode::ZeroSpread && e.code() != ErrorCode::ZeroVariance) throw;
        spdlog::warn("{}: classification/diagnostics unavailable: {}", command, e.what());
        s.classified.clear();
        s.diagnostics = fmt::format("unavailable={}\nreason={}\n", to_string(e.code()), e.what());
    }
    return s;
}

}  // namespace

int exit_code_for(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::UnknownKey:
        case ErrorCode::TypeMismatch:
        case ErrorCode::InvalidConfig:
        case ErrorCode::InvalidSpec:
        case ErrorCode::LagTooLarge:
        case ErrorCode::WindowTooLarge:
        case ErrorCode::InfeasibleBand:
            return kConfigError;
        case ErrorCode::Io:
        case ErrorCode::MissingColumn:
        case ErrorCode::MalformedRow:
        case ErrorCode::DuplicateRegion:
        case ErrorCode::NonPositivePopulation:
        case ErrorCode::NonPositiveArea:
        case ErrorCode::UnknownRegion:
        case ErrorCode::NegativeCount:
        case ErrorCode::DevicesExceedTotal:
        case ErrorCode::BadDate:
        case ErrorCode::MissingDates:
        case ErrorCode::DuplicateDate:
        case ErrorCode::NegativeCases:
        case ErrorCode::ZeroDevices:
            return kIngestError;
        case ErrorCode::EmptyAfterFilter:
            return kEmptyAfterFilter;
        default:
            return kInternalError;
    }
}

int cmd_run(const RunConfig& config) {
    return guarded("run", [&] {
        const Prepared p = prepare(config);
        const analysis::Study study(p.dataset, config.analysis, config.band);
        const auto scored = analysis::run_regions(study, p.filtered.kept, effective_workers(config));

        // Export every region: kept ones with their outcome, the rest as filtered.
        std::vector<RegionResult> all = scored;
        for (const auto& [id, meta] : p.dataset.regions) {
            if (!std::binary_search(p.filtered.kept.begin(), p.filtered.kept.end(), id)) {
                all.push_back({id, std::nullopt, 0, config.analysis.lag_days, SkipReason::Filtered});
            }
        }
        std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.region_id < b.region_id; });

        const auto [classified, diagnostics] = summarize(scored, p.dataset.regions, "run");

        const auto& dir = config.out_dir;
        std::filesystem::create_directories(dir);
        write_file(dir / "results.csv", [&](std::ostream& o) { report::write_results(o, all); });
        write_file(dir / "classified.csv", [&](std::ostream& o) { report::write_classified(o, classified); });
        write_file(dir / "diagnostics.txt", [&](std::ostream& o) { o << diagnostics; });
        write_file(dir / "filter_report.csv", [&](std::ostream& o) { report::write_filter_report(o, p.filtered.report); });
        if (config.export_mobility) {
            std::map<std::string, DailySeries> mob;
            for (const auto& id : p.filtered.kept) mob.emplace(id, study.mobility(id));
            write_file(dir / "mobility_series.csv", [&](std::ostream& o) { report::write_mobility(o, mob); });
        }
        write_file(dir / "run_log.txt", [&](std::ostream& o) { o << log_text(config, p.filtered.report, "run"); });
        const auto n_scored = std::count_if(scored.begin(), scored.end(), [](const auto& r) { return r.scored(); });
        spdlog::info("run: {} regions scored, {} skipped; outputs in {}", n_scored, scored.size() - n_scored,
                     dir.string());
        return kOk;
    });
}

int cmd_lag_sweep(const RunConfig& config) {
    return guarded("lag-sweep", [&] {
        if (config.lag_min > config.lag_max) {
            throw Error(ErrorCode::InvalidConfig,
                        fmt::format("lag-min {} exceeds lag-max {}", config.lag_min, config.lag_max));
        }
        const Prepared p = prepare(config);
        const analysis::Study study(p.dataset, config.analysis, config.band);
        const auto sweeps = analysis::lag_sweep_regions(study, p.filtered.kept, config.lag_min, config.lag_max,
                                                        effective_workers(config));
        const auto& dir = config.out_dir;
        std::filesystem::create_directories(dir);
        write_file(dir / "lag_sweep.csv", [&](std::ostream& o) { report::write_lag_sweep(o, sweeps); });
        write_file(dir / "lag_best.csv", [&](std::ostream& o) { report::write_lag_best(o, sweeps); });
        write_file(dir / "filter_report.csv", [&](std::ostream& o) { report::write_filter_report(o, p.filtered.report); });
        write_file(dir / "lag_sweep_log.txt",
                   [&](std::ostream& o) { o << log_text(config, p.filtered.report, "lag-sweep"); });
        spdlog::info("lag-sweep: {} regions x lags {}..{}; outputs in {}", sweeps.size(), config.lag_min,
                     config.lag_max, dir.string());
        return kOk;
    });
}

int cmd_synth(const std::filesystem::path& spec_path, const std::filesystem::path& out_dir,
              std::optional<std::uint64_t> seed) {
    return guarded("synth", [&] {
        std::ifstream in(spec_path);
        if (!in) throw Error(ErrorCode::InvalidSpec, fmt::format("cannot read scenario spec '{}'", spec_path.string()));
        std::ostringstream text;
        text << in.rdbuf();
        auto spec = synth::ScenarioSpec::from_json_text(text.str());
        if (seed) spec.seed = *seed;
        spec.validate();
        const auto data = synth::gen_dataset(spec);
        synth::write_dataset(data, spec, out_dir);
        spdlog::info("synth: {} regions x {} days written to {}", spec.n_regions, spec.n_days, out_dir.string());
        return kOk;
    });
}

int cmd_report(const std::filesystem::path& results_path, const std::filesystem::path& regions_path,
               const std::filesystem::path& out_dir) {
    return guarded("report", [&] {
        std::ifstream in(results_path);
        if (!in) throw Error(ErrorCode::Io, fmt::format("cannot open input file '{}'", results_path.string()));
        const auto results = report::read_results(in, results_path.string());
        const auto regions = ingest::parse_regions(regions_path);
        const auto [classified, diagnostics] = summarize(results, regions, "report");
        std::filesystem::create_directories(out_dir);
        write_file(out_dir / "classified.csv", [&](std::ostream& o) { report::write_classified(o, classified); });
        write_file(out_dir / "diagnostics.txt", [&](std::ostream& o) { o << diagnostics; });
        return kOk;
    });
}

}  // namespace warpflow::cli
