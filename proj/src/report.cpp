#include "warpflow/report.hpp"

#include <istream>
#include <ostream>

#include <fmt/format.h>

#include "warpflow/csv.hpp"

namespace warpflow::report {

namespace {

std::string opt_number(const std::optional<double>& v) { return v ? csv::format_number(*v) : std::string(); }

}  // namespace

void write_results(std::ostream& out, std::span<const RegionResult> results) {
    out << kResultsHeader << '\n';
    for (const auto& r : results) {
        out << csv::quote(r.region_id) << ',' << opt_number(r.dtw_distance) << ',';
        if (r.skipped != SkipReason::Filtered) out << r.n;
        out << ',' << r.lag_days << ',' << (r.skipped ? to_string(*r.skipped) : "") << '\n';
    }
}

std::vector<RegionResult> read_results(std::istream& in, const std::string& source) {
    enum { kId, kDistance, kN, kLag, kReason };
    csv::Reader reader(in, source, {"region_id", "dtw_distance", "n", "lag_days", "skipped_reason"});
    std::vector<RegionResult> results;
    while (reader.next()) {
        RegionResult r;
        r.region_id = reader.field(kId);
        if (!reader.field(kDistance).empty()) {
            r.dtw_distance = csv::parse_double(reader.field(kDistance), reader.where(), "dtw_distance");
        }
        if (!reader.field(kN).empty()) {
            r.n = static_cast<std::size_t>(csv::parse_integer(reader.field(kN), reader.where(), "n"));
        }
        r.lag_days = static_cast<std::size_t>(csv::parse_integer(reader.field(kLag), reader.where(), "lag_days"));
        const std::string& reason = reader.field(kReason);
        if (!reason.empty()) {
            r.skipped = parse_skip_reason(reason);
            if (!r.skipped) {
                throw Error(ErrorCode::MalformedRow, fmt::format("{}: unknown skipped_reason '{}'", reader.where(), reason));
            }
        }
        if (r.dtw_distance.has_value() == r.skipped.has_value()) {
            throw Error(ErrorCode::MalformedRow,
                        fmt::format("{}: exactly one of dtw_distance and skipped_reason must be set", reader.where()));
        }
        results.push_back(std::move(r));
    }
    return results;
}

void write_classified(std::ostream& out, std::span<const ClassifiedResult> classified) {
    out << kClassifiedHeader << '\n';
    for (const auto& c : classified) {
        out << csv::quote(c.region_id) << ',' << csv::format_number(c.dtw_distance) << ','
            << csv::format_number(c.z_score) << ',' << csv::quote(c.class_label) << '\n';
    }
}

void write_lag_sweep(std::ostream& out, std::span<const LagSweepResult> sweeps) {
    out << kLagSweepHeader << '\n';
    for (const auto& s : sweeps) {
        for (const auto& p : s.points) {
            out << csv::quote(s.region_id) << ',' << p.lag_days << ',' << opt_number(p.dtw_distance) << '\n';
        }
    }
}

void write_lag_best(std::ostream& out, std::span<const LagSweepResult> sweeps) {
    out << kLagBestHeader << '\n';
    for (const auto& s : sweeps) {
        out << csv::quote(s.region_id) << ',';
        if (s.best_lag) out << *s.best_lag;
        out << ',' << opt_number(s.best_distance) << ',' << opt_number(s.best_per_day) << '\n';
    }
}

void write_filter_report(std::ostream& out, const FilterReport& report) {
    out << kFilterHeader << '\n';
    for (const auto& e : report.entries) {
        out << e.stage << ',' << csv::quote(e.region_id) << ',' << csv::quote(e.reason) << '\n';
    }
}

void write_filter_summary(std::ostream& out, const FilterReport& report) {
    out << "regions_total=" << report.total << '\n'
        << "dropped_non_metro=" << report.dropped_non_metro << '\n'
        << "dropped_no_cases=" << report.dropped_no_cases << '\n'
        << "threshold_candidates=" << report.candidates << '\n'
        << "threshold_kind=" << (report.threshold_is_median ? "median" : "fixed") << '\n'
        << "threshold_mean_cases=" << csv::format_number(report.threshold) << '\n'
        << "dropped_below_threshold=" << report.dropped_below_threshold << '\n'
        << "kept=" << report.kept << '\n';
}

void write_diagnostics(std::ostream& out, const DiagnosticsReport& d) {
    auto flag = [](double r) { return DiagnosticsReport::weak(r) ? "weak" : "not_weak"; };
    out << "scored_regions=" << d.scored_regions << '\n'
        << "pearson_dtw_population=" << csv::format_number(d.r_population) << '\n'
        << "pearson_dtw_population_flag=" << flag(d.r_population) << '\n'
        << "pearson_dtw_density=" << csv::format_number(d.r_density) << '\n'
        << "pearson_dtw_density_flag=" << flag(d.r_density) << '\n'
        << "weak_threshold_abs_r=" << csv::format_number(DiagnosticsReport::kWeakBelow) << '\n';
}

void write_mobility(std::ostream& out, const std::map<std::string, DailySeries>& mobility) {
    out << kMobilityHeader << '\n';
    for (const auto& [id, s] : mobility) {
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            out << csv::quote(id) << ',' << (s.start + static_cast<long>(i)).iso() << ','
                << csv::format_number(s.values[i]) << '\n';
        }
    }
}

}  // namespace warpflow::report
