// warpflow: mobility/case-series similarity by dynamic time warping.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <spdlog/cfg/helpers.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "warpflow/commands.hpp"
#include "warpflow/error.hpp"

namespace {

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("warpflow");
    logger->set_pattern("[%l] %v");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::info);
    if (const char* level = std::getenv("WARPFLOW_LOG")) spdlog::cfg::helpers::load_levels(level);
}

struct AnalysisFlags {
    std::string config_path;
    // Flag name (without dashes) -> raw value; only flags actually given are applied.
    std::map<std::string, std::string> storage;

    void add(CLI::App* app, const std::string& key, const std::string& help) {
        app->add_option("--" + key, storage[key], help);
    }

    warpflow::cli::Settings collect(CLI::App* app) const {
        warpflow::cli::Settings out;
        for (const auto& key : warpflow::cli::config_keys()) {
            const std::string k(key);
            auto it = storage.find(k);
            if (it != storage.end() && app->count("--" + k) > 0) out.emplace_back(k, it->second);
        }
        return out;
    }
};

void add_analysis_flags(CLI::App* app, AnalysisFlags& flags, bool sweep) {
    app->add_option("--config", flags.config_path, "flat key = value config file; flags override it");
    flags.add(app, "regions", "regions.csv");
    flags.add(app, "flows", "flows.csv");
    flags.add(app, "cases", "cases.csv");
    flags.add(app, "out", "output directory");
    flags.add(app, "lag", "days mobility leads cases (default 7)");
    flags.add(app, "window", "mobility moving-average window in days (default 7)");
    flags.add(app, "start", "first study day, YYYY-MM-DD (default 2020-11-30)");
    flags.add(app, "end", "last study day, YYYY-MM-DD (default 2021-01-24)");
    flags.add(app, "metro-only", "keep only metropolitan regions: true|false (default true)");
    flags.add(app, "min-case-filter", "'median' or a fixed mean-daily-cases threshold");
    flags.add(app, "resmooth-cases", "apply the moving average to cases as well: true|false");
    flags.add(app, "fill-missing", "case gaps: error|zero|previous (default error)");
    flags.add(app, "band-radius", "Sakoe-Chiba radius, or 'none' (default)");
    flags.add(app, "workers", "worker threads (default: hardware concurrency)");
    flags.add(app, "export-mobility", "also write mobility_series.csv: true|false");
    if (sweep) {
        flags.add(app, "lag-min", "first lag of the sweep (default 0)");
        flags.add(app, "lag-max", "last lag of the sweep (default 30)");
    }
}

}  // namespace

int main(int argc, char** argv) {
    setup_logging();
    namespace wc = warpflow::cli;

    CLI::App app{"warpflow - per-region DTW similarity between mobility inflow and case series"};
    app.require_subcommand(1);

    AnalysisFlags run_flags, sweep_flags;
    auto* run = app.add_subcommand("run", "filter regions, align series and compute DTW distances");
    add_analysis_flags(run, run_flags, false);
    auto* sweep = app.add_subcommand("lag-sweep", "DTW distance for every lag in a range");
    add_analysis_flags(sweep, sweep_flags, true);

    std::string spec_path, synth_out;
    std::uint64_t seed = 0;
    auto* synth = app.add_subcommand("synth", "generate a synthetic dataset with known ground truth");
    synth->add_option("--spec", spec_path, "scenario JSON")->required();
    synth->add_option("--out", synth_out, "output directory")->required();
    auto* seed_opt = synth->add_option("--seed", seed, "override the scenario seed");

    std::string results_path, regions_path, report_out;
    auto* rep = app.add_subcommand("report", "re-derive classified.csv and diagnostics.txt from results.csv");
    rep->add_option("--results", results_path, "results.csv")->required();
    rep->add_option("--regions", regions_path, "regions.csv")->required();
    rep->add_option("--out", report_out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : wc::kConfigError;
    }

    auto load = [](CLI::App* sub, const AnalysisFlags& flags, wc::RunConfig& config) {
        try {
            std::optional<std::filesystem::path> file;
            if (!flags.config_path.empty()) file = flags.config_path;
            config = wc::load_config(file, flags.collect(sub));
            return true;
        } catch (const warpflow::Error& e) {
            spdlog::error("config: {} ({})", e.what(), warpflow::to_string(e.code()));
            return false;
        }
    };

    wc::RunConfig config;
    if (*run) {
        if (!load(run, run_flags, config)) return wc::kConfigError;
        return wc::cmd_run(config);
    }
    if (*sweep) {
        if (!load(sweep, sweep_flags, config)) return wc::kConfigError;
        return wc::cmd_lag_sweep(config);
    }
    if (*synth) {
        std::optional<std::uint64_t> s;
        if (seed_opt->count() > 0) s = seed;
        return wc::cmd_synth(spec_path, synth_out, s);
    }
    if (*rep) return wc::cmd_report(results_path, regions_path, report_out);
    return wc::kInternalError;
}
