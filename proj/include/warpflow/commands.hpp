#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>

#include "warpflow/config.hpp"

namespace warpflow::cli {

enum ExitCode : int {
    kOk = 0,
    kConfigError = 1,
    kIngestError = 2,
    kEmptyAfterFilter = 3,
    kInternalError = 4,
};

/// Maps a library error to the process exit status.
int exit_code_for(ErrorCode code) noexcept;

/// ingest -> filter -> per-region DTW -> results.csv, classified.csv,
/// diagnostics.txt, filter_report.csv, run_log.txt.
int cmd_run(const RunConfig& config);

/// Sweeps lags config.lag_min..config.lag_max for every kept region ->
/// lag_sweep.csv, lag_best.csv, filter_report.csv, lag_sweep_log.txt.
int cmd_lag_sweep(const RunConfig& config);

/// Reads a scenario JSON and writes regions/flows/cases CSVs plus truth.json.
int cmd_synth(const std::filesystem::path& spec_path, const std::filesystem::path& out_dir,
              std::optional<std::uint64_t> seed = std::nullopt);

/// Re-derives classified.csv and diagnostics.txt from an existing results.csv.
int cmd_report(const std::filesystem::path& results_path, const std::filesystem::path& regions_path,
               const std::filesystem::path& out_dir);

}  // namespace warpflow::cli
