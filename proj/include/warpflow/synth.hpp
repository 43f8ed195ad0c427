#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "warpflow/ingest.hpp"
#include "warpflow/series.hpp"

namespace warpflow::synth {

/// How a region's cases relate to its (smoothed) mobility.
enum class Association { LaggedCopy, LaggedScaled, Independent, Inverse };

std::string_view to_string(Association a) noexcept;
Association parse_association(std::string_view text);

/// Per-region departures from the scenario defaults.
struct RegionOverride {
    std::size_t index = 0;
    std::optional<Association> association;
    std::optional<std::size_t> true_lag;
    std::optional<double> noise_sigma;
    std::optional<bool> degenerate;  // constant mobility
    std::optional<bool> is_metro;
};

struct ScenarioSpec {
    std::size_t n_regions = 50;
    std::size_t n_days = 63;
    std::size_t true_lag = 7;
    Association association = Association::LaggedCopy;
    double noise_sigma = 0.0;  // fraction of the signal amplitude
    std::uint64_t seed = 20201123;
    Date start_date = Date::from_ymd(2020, 11, 23);
    std::size_t smooth_window = 7;
    std::vector<RegionOverride> overrides;

    /// Throws InvalidSpec.
    void validate() const;

    /// JSON object with the field names above (`start_date` as ISO text,
    /// `association` as its snake_case name). Unknown keys are rejected.
    static ScenarioSpec from_json_text(const std::string& text);
    std::string to_json_text() const;
};

/// Resolved parameters for one region.
struct RegionTruth {
    std::string region_id;
    std::size_t true_lag = 0;
    Association association = Association::LaggedCopy;
    double noise_sigma = 0.0;
    bool degenerate = false;
    bool is_metro = true;
};

RegionTruth region_truth(const ScenarioSpec& spec, std::size_t region_index);
std::string region_id_for(std::size_t region_index);

/// The generator's random source: std::mt19937_64 (its output sequence is
/// fixed by the C++ standard), seeded with a SplitMix64 mix of
/// (seed, region_index, stream). Uniforms take the top 53 bits; normals use
/// the Box-Muller transform. Distribution objects from <random> are not used
/// because their output is implementation-defined.
class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t region_index, std::uint64_t stream_id);

    double uniform();  // [0, 1)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal();

private:
    std::mt19937_64 engine_;
};

/// baseline + A*sin(2*pi*t/period + phase) + noise_sigma*A*N(0,1), floored at a
/// small positive fraction of the baseline. Constant (= baseline) for degenerate regions.
DailySeries gen_mobility_series(const ScenarioSpec& spec, std::size_t region_index);

/// Cases from a mobility series, shifted by the region's true lag with the
/// first value repeated for the earliest days. Noise is noise_sigma times half
/// the series' range.
DailySeries gen_lagged_cases(const DailySeries& mobility, const ScenarioSpec& spec, std::size_t region_index);

struct SyntheticDataset {
    Dataset dataset;
    /// Mobility as the pipeline will aggregate it from the emitted flows.
    std::map<std::string, DailySeries> mobility;
    std::vector<RegionTruth> truth;
};

/// Builds regions, flows and cases. Flows are device counts that, once scaled
/// by population over panel size, reproduce each region's generated mobility
/// up to device rounding; cases are derived from the smoothed realized mobility so a
/// noiseless lagged copy aligns exactly under the default pipeline.
SyntheticDataset gen_dataset(const ScenarioSpec& spec);

/// Writes regions.csv, flows.csv, cases.csv and truth.json into `dir`.
void write_dataset(const SyntheticDataset& data, const ScenarioSpec& spec, const std::filesystem::path& dir);

}  // namespace warpflow::synth
