#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "warpflow/dtw.hpp"
#include "warpflow/ingest.hpp"
#include "warpflow/preprocess.hpp"

namespace warpflow::cli {

/// Everything a batch run needs. Defaults: 7-day lag, 7-day window,
/// metro regions only, median case filter, 2020-11-30..2021-01-24.
struct RunConfig {
    ingest::InputPaths inputs;
    std::filesystem::path out_dir = "out";
    AnalysisConfig analysis;
    FillPolicy fill_missing = FillPolicy::Error;
    dtw::Band band;
    std::size_t workers = 0;  // 0 = hardware concurrency
    std::size_t lag_min = 0;
    std::size_t lag_max = 30;
    bool export_mobility = false;
};

/// Ordered key/value pairs; later entries win.
using Settings = std::vector<std::pair<std::string, std::string>>;

/// Every recognised key. Keys are spelled exactly like the long flags.
const std::vector<std::string_view>& config_keys();

/// Parses flat `key = value` lines. `#` starts a comment; values may be
/// double-quoted. Throws UnknownKey for unrecognised keys and InvalidConfig
/// for malformed lines.
Settings parse_config_text(std::string_view text, std::string_view source = "config");

/// Throws UnknownKey or TypeMismatch.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

/// defaults <- config file <- flag settings.
RunConfig load_config(const std::optional<std::filesystem::path>& file, const Settings& flags = {});

/// Cross-field checks (date range order, window and lag sizes). Throws InvalidConfig.
void validate(const RunConfig& config);

/// The effective configuration in config-file syntax. The output directory and
/// worker count are left out: neither affects results, and leaving them out keeps
/// run logs byte-identical across reruns.
std::string format_config(const RunConfig& config);

}  // namespace warpflow::cli
