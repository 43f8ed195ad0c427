#include "warpflow/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "warpflow/csv.hpp"
#include "warpflow/mobility.hpp"
#include "warpflow/parallel.hpp"

namespace warpflow {

std::string_view to_string(SkipReason reason) noexcept {
    switch (reason) {
        case SkipReason::DegenerateMobility: return "degenerate_mobility";
        case SkipReason::DegenerateCases: return "degenerate_cases";
        case SkipReason::Filtered: return "filtered";
    }
    return "filtered";
}

std::optional<SkipReason> parse_skip_reason(std::string_view text) {
    if (text == "degenerate_mobility") return SkipReason::DegenerateMobility;
    if (text == "degenerate_cases") return SkipReason::DegenerateCases;
    if (text == "filtered") return SkipReason::Filtered;
    return std::nullopt;
}

namespace analysis {

Study::Study(const Dataset& dataset, AnalysisConfig config, dtw::Band band)
    : dataset_(&dataset),
      config_(std::move(config)),
      band_(band),
      mobility_(mobility::aggregate_all_mobility(dataset.flows, dataset.regions, dataset.date_range)) {
    config_.date_range = dataset.date_range;
}

const DailySeries& Study::mobility(const std::string& region_id) const {
    auto it = mobility_.find(region_id);
    if (it == mobility_.end()) {
        throw Error(ErrorCode::UnknownRegion, fmt::format("region '{}' is not in the region table", region_id));
    }
    return it->second;
}

const DailySeries& Study::cases(const std::string& region_id) const { return dataset_->cases.at(region_id); }

RegionResult Study::run_region(const std::string& region_id) const { return run_region(region_id, config_.lag_days); }

RegionResult Study::run_region(const std::string& region_id, std::size_t lag_days) const {
    RegionResult result{region_id, std::nullopt, 0, lag_days, std::nullopt};
    const DailySeries& mob = mobility(region_id);
    if (!dataset_->cases.contains(region_id)) {
        result.skipped = SkipReason::Filtered;
        return result;
    }
    AnalysisConfig cfg = config_;
    cfg.lag_days = lag_days;
    try {
        const AlignedPair pair = preprocess::build_aligned_pair(mob, cases(region_id), cfg);
        result.n = pair.n;
        result.dtw_distance = dtw::dtw_distance(pair.mobility_norm, pair.cases_norm, band_);
    } catch (const DegenerateSeriesError& e) {
        result.n = mob.size() > lag_days ? mob.size() - lag_days : 0;
        result.skipped =
            e.side() == SeriesSide::Mobility ? SkipReason::DegenerateMobility : SkipReason::DegenerateCases;
    }
    return result;
}

LagSweepResult Study::lag_sweep(const std::string& region_id, std::size_t lag_min, std::size_t lag_max) const {
    const std::size_t total = dataset_->date_range.days();
    if (lag_min > lag_max) {
        throw Error(ErrorCode::LagTooLarge, fmt::format("lag range {}..{} is empty", lag_min, lag_max));
    }
    if (lag_max >= total) {
        throw Error(ErrorCode::LagTooLarge,
                    fmt::format("maximum lag {} needs more than {} days of data", lag_max, total));
    }
    LagSweepResult sweep;
    sweep.region_id = region_id;
    for (std::size_t lag = lag_min; lag <= lag_max; ++lag) {
        const RegionResult r = run_region(region_id, lag);
        const LagPoint& point = sweep.points.emplace_back(LagPoint{lag, r.n, r.dtw_distance, r.skipped});
        const auto per_day = point.per_day();
        if (per_day && (!sweep.best_per_day || *per_day < *sweep.best_per_day)) {
            sweep.best_per_day = per_day;
            sweep.best_distance = r.dtw_distance;
            sweep.best_lag = lag;
        }
    }
    return sweep;
}

RegionResult run_region(const std::string& region_id, const Dataset& dataset, const AnalysisConfig& config,
                        dtw::Band band) {
    return Study(dataset, config, band).run_region(region_id);
}

std::vector<RegionResult> run_regions(const Study& study, std::span<const std::string> region_ids,
                                      std::size_t workers) {
    std::vector<std::string> ids(region_ids.begin(), region_ids.end());
    std::sort(ids.begin(), ids.end());
    return parallel_map(ids.size(), workers, [&](std::size_t i) { return study.run_region(ids[i]); });
}

std::vector<RegionResult> run_all(const Dataset& dataset, const AnalysisConfig& config, const RunOptions& options) {
    const FilterOutcome filtered = preprocess::filter_regions(dataset.regions, dataset.cases, config);
    const Study study(dataset, config, options.band);
    return run_regions(study, filtered.kept, options.workers);
}

LagSweepResult lag_sweep(const std::string& region_id, const Dataset& dataset, const AnalysisConfig& config,
                         std::size_t lag_min, std::size_t lag_max, dtw::Band band) {
    return Study(dataset, config, band).lag_sweep(region_id, lag_min, lag_max);
}

std::vector<LagSweepResult> lag_sweep_regions(const Study& study, std::span<const std::string> region_ids,
                                              std::size_t lag_min, std::size_t lag_max, std::size_t workers) {
    std::vector<std::string> ids(region_ids.begin(), region_ids.end());
    std::sort(ids.begin(), ids.end());
    // Validate the range once so the error surfaces even with no regions.
    if (lag_min > lag_max || lag_max >= study.dataset().date_range.days()) {
        throw Error(ErrorCode::LagTooLarge, fmt::format("lag range {}..{} is invalid for {} days of data", lag_min,
                                                        lag_max, study.dataset().date_range.days()));
    }
    return parallel_map(ids.size(), workers, [&](std::size_t i) { return study.lag_sweep(ids[i], lag_min, lag_max); });
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) {
        throw Error(ErrorCode::LengthMismatch, fmt::format("pearson: {} vs {} values", xs.size(), ys.size()));
    }
    if (xs.size() < 2) throw Error(ErrorCode::ZeroVariance, "pearson needs at least two points");
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx, dy = ys[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (!(sxx > 0.0) || !(syy > 0.0)) throw Error(ErrorCode::ZeroVariance, "pearson: a variable has zero variance");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

DiagnosticsReport run_diagnostics(std::span<const RegionResult> results, const RegionTable& regions) {
    std::vector<double> dtw, population, density;
    for (const auto& r : results) {
        if (!r.scored()) continue;
        auto it = regions.find(r.region_id);
        if (it == regions.end()) {
            throw Error(ErrorCode::UnknownRegion, fmt::format("result region '{}' is not in the region table", r.region_id));
        }
        dtw.push_back(*r.dtw_distance);
        population.push_back(static_cast<double>(it->second.population));
        density.push_back(it->second.density());
    }
    DiagnosticsReport report;
    report.scored_regions = dtw.size();
    report.r_population = pearson(dtw, population);
    report.r_density = pearson(dtw, density);
    return report;
}

std::pair<int, std::string> classify_z(double z, ClassBreaks breaks) {
    const std::string inner = csv::format_number(breaks.inner);
    const std::string outer = csv::format_number(breaks.outer);
    const double a = std::abs(z);
    if (a <= breaks.inner) return {2, fmt::format("-{}..{}", inner, inner)};
    if (a <= breaks.outer) {
        return z < 0 ? std::pair{1, fmt::format("-{}..-{}", outer, inner)} : std::pair{3, fmt::format("{}..{}", inner, outer)};
    }
    return z < 0 ? std::pair{0, fmt::format("< -{}", outer)} : std::pair{4, fmt::format("> {}", outer)};
}

std::vector<ClassifiedResult> classify_std(std::span<const RegionResult> results, ClassBreaks breaks) {
    std::vector<const RegionResult*> scored;
    for (const auto& r : results) {
        if (r.scored()) scored.push_back(&r);
    }
    if (scored.size() < 2) throw Error(ErrorCode::ZeroSpread, "classification needs at least two scored regions");
    const double n = static_cast<double>(scored.size());
    double mean = 0.0;
    for (const auto* r : scored) mean += *r->dtw_distance;
    mean /= n;
    double ss = 0.0;
    for (const auto* r : scored) ss += (*r->dtw_distance - mean) * (*r->dtw_distance - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    if (!(sd > 0.0)) throw Error(ErrorCode::ZeroSpread, "all DTW distances are identical");

    std::vector<ClassifiedResult> out;
    out.reserve(scored.size());
    for (const auto* r : scored) {
        const double z = (*r->dtw_distance - mean) / sd;
        auto [idx, label] = classify_z(z, breaks);
        out.push_back({r->region_id, *r->dtw_distance, z, idx, std::move(label)});
    }
    std::sort(out.begin(), out.end(),
              [](const ClassifiedResult& a, const ClassifiedResult& b) { return a.region_id < b.region_id; });
    return out;
}

}  // namespace analysis
}  // namespace warpflow
