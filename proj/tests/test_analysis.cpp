#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "test_support.hpp"
#include "warpflow/analysis.hpp"
#include "warpflow/error.hpp"
#include "warpflow/synth.hpp"

using namespace warpflow;
using namespace warpflow::analysis;
using V = std::vector<double>;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::Io;
}

RegionResult scored(const std::string& id, double d) { return {id, d, 56, 7, std::nullopt}; }

// One region whose mobility is a within flow reproducing `mobility` (population 1000,
// panel 1000) and whose cases are `cases`.
Dataset single_region(const V& mobility, const V& cases) {
    Dataset d;
    const Date start = Date::parse("2020-11-23");
    d.date_range = DateRange::make(start, start + static_cast<long>(mobility.size() - 1));
    d.regions.emplace("A", testing::region("A", 1000));
    for (std::size_t t = 0; t < mobility.size(); ++t) {
        d.flows.push_back({start + static_cast<long>(t), "A", "A", static_cast<std::int64_t>(mobility[t]), 1000});
    }
    d.cases.emplace("A", DailySeries{"A", start, cases});
    return d;
}

V wave(std::size_t n, double period, double phase = 0.0) {
    V v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = std::round(500 + 300 * std::sin(6.283185307179586 * static_cast<double>(i) / period + phase));
    return v;
}

}  // namespace

TEST_CASE("pearson examples") {
    CHECK(pearson(V{1, 2, 3}, V{2, 4, 6}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pearson(V{1, 2, 3}, V{3, 2, 1}) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(pearson(V{1, 2, 3, 4}, V{1, 3, 2, 4}) == doctest::Approx(0.8));
    CHECK(code_of([] { pearson(V{1, 2}, V{1, 2, 3}); }) == ErrorCode::LengthMismatch);
    CHECK(code_of([] { pearson(V{1, 1, 1}, V{1, 2, 3}); }) == ErrorCode::ZeroVariance);
    CHECK(code_of([] { pearson(V{1}, V{2}); }) == ErrorCode::ZeroVariance);
}

TEST_CASE("pearson is affine invariant, antisymmetric and bounded") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 3 + rng() % 50;
        const auto x = testing::random_series(rng, n, -5, 5);
        const auto y = testing::random_series(rng, n, -5, 5);
        const double r = pearson(x, y);
        CHECK(std::abs(r) <= 1.0);
        V ax(n), ny(n);
        for (std::size_t i = 0; i < n; ++i) {
            ax[i] = 3.5 * x[i] - 2.0;
            ny[i] = -y[i];
        }
        CHECK(pearson(ax, y) == doctest::Approx(r).epsilon(1e-9));
        CHECK(pearson(x, ny) == doctest::Approx(-r).epsilon(1e-9));
        CHECK(pearson(y, x) == doctest::Approx(r).epsilon(1e-12));
    }
}

TEST_CASE("classify_std") {
    SUBCASE("[1,3,5] gives z = -1, 0, 1") {
        const std::vector<RegionResult> rs{scored("b", 3), scored("a", 1), scored("c", 5)};
        const auto c = classify_std(rs);
        REQUIRE(c.size() == 3);
        CHECK(c[0].region_id == "a");
        CHECK(c[0].z_score == doctest::Approx(-1.0).epsilon(1e-12));
        CHECK(c[1].z_score == 0.0);
        CHECK(c[2].z_score == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(c[0].class_label == "-1.5..-0.5");
        CHECK(c[1].class_label == "-0.5..0.5");
        CHECK(c[2].class_label == "0.5..1.5");
    }
    SUBCASE("[0,0,0,4] puts the outlier at z = 1.5") {
        const std::vector<RegionResult> rs{scored("a", 0), scored("b", 0), scored("c", 0), scored("d", 4)};
        const auto c = classify_std(rs);
        CHECK(c[3].z_score == doctest::Approx(1.5).epsilon(1e-12));
        CHECK(c[3].class_label == "0.5..1.5");
        CHECK(c[0].z_score == doctest::Approx(-0.5).epsilon(1e-12));
    }
    SUBCASE("all equal") {
        const std::vector<RegionResult> rs{scored("a", 2), scored("b", 2)};
        CHECK(code_of([&] { classify_std(rs); }) == ErrorCode::ZeroSpread);
    }
    SUBCASE("skipped regions are ignored") {
        std::vector<RegionResult> rs{scored("a", 1), scored("b", 3), scored("c", 5)};
        rs.push_back({"d", std::nullopt, 0, 7, SkipReason::Filtered});
        CHECK(classify_std(rs).size() == 3);
    }
    SUBCASE("labels at the breaks") {
        CHECK(classify_z(-2.0).second == "< -1.5");
        CHECK(classify_z(-1.5).second == "-1.5..-0.5");
        CHECK(classify_z(0.5).second == "-0.5..0.5");
        CHECK(classify_z(1.5000001).second == "> 1.5");
        CHECK(classify_z(-2.0).first == 0);
        CHECK(classify_z(2.0).first == 4);
    }
}

TEST_CASE("z-scores have zero mean and unit sample deviation") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<RegionResult> rs;
        const std::size_t n = 2 + rng() % 100;
        for (std::size_t i = 0; i < n; ++i) rs.push_back(scored(synth::region_id_for(i), testing::random_series(rng, 1, 0, 50)[0]));
        const auto c = classify_std(rs);
        double mean = 0.0;
        for (const auto& r : c) mean += r.z_score;
        mean /= static_cast<double>(n);
        double ss = 0.0;
        for (const auto& r : c) ss += (r.z_score - mean) * (r.z_score - mean);
        CHECK(std::abs(mean) <= 1e-9);
        CHECK(std::abs(std::sqrt(ss / static_cast<double>(n - 1)) - 1.0) <= 1e-9);
    }
}

TEST_CASE("diagnostics correlate distances with population and density") {
    RegionTable regions;
    std::vector<RegionResult> rs;
    for (int i = 1; i <= 6; ++i) {
        const std::string id = "R" + std::to_string(i);
        regions.emplace(id, testing::region(id, 1000 * i, 10.0 * (7 - i)));
        rs.push_back(scored(id, 2.0 * (1000 * i) + 3.0));
    }
    const auto d = run_diagnostics(rs, regions);
    CHECK(d.scored_regions == 6);
    CHECK(d.r_population == doctest::Approx(1.0).epsilon(1e-9));
    V dist, dens;
    for (const auto& r : rs) {
        dist.push_back(*r.dtw_distance);
        dens.push_back(regions.at(r.region_id).density());
    }
    CHECK(d.r_density == doctest::Approx(pearson(dist, dens)).epsilon(1e-12));
    CHECK(d.r_density > 0.8);

    for (auto& r : rs) r.dtw_distance = 1.0;
    CHECK(code_of([&] { run_diagnostics(rs, regions); }) == ErrorCode::ZeroVariance);
    CHECK(DiagnosticsReport::weak(0.29));
    CHECK_FALSE(DiagnosticsReport::weak(-0.3));
}

TEST_CASE("run_region") {
    const V m = wave(40, 17);
    SUBCASE("cases equal to smoothed mobility, resmoothed, lag 0, score zero") {
        AnalysisConfig cfg;
        cfg.date_range = DateRange::make(Date::parse("2020-11-23"), Date::parse("2020-11-23") + 39);
        cfg.lag_days = 0;
        cfg.resmooth_cases = true;
        const auto r = run_region("A", single_region(m, m), cfg);
        REQUIRE(r.scored());
        CHECK(*r.dtw_distance == 0.0);
        CHECK(r.n == 40);
    }
    SUBCASE("constant mobility is skipped on the mobility side") {
        AnalysisConfig cfg;
        const auto r = run_region("A", single_region(V(63, 400), wave(63, 20)), cfg);
        CHECK_FALSE(r.scored());
        CHECK(r.skipped == SkipReason::DegenerateMobility);
    }
    SUBCASE("constant cases are skipped on the cases side") {
        const auto r = run_region("A", single_region(m, V(40, 3)), AnalysisConfig{});
        CHECK(r.skipped == SkipReason::DegenerateCases);
    }
}

TEST_CASE("noiseless lagged copies score zero at the true lag") {
    synth::ScenarioSpec spec;
    spec.n_regions = 6;
    const auto data = synth::gen_dataset(spec);
    AnalysisConfig cfg;
    cfg.date_range = data.dataset.date_range;
    cfg.metro_only = false;
    cfg.min_case_filter = CaseFilter::fixed(0.0);
    const auto results = run_all(data.dataset, cfg);
    REQUIRE(results.size() == 6);
    for (const auto& r : results) {
        REQUIRE(r.scored());
        CHECK(*r.dtw_distance == 0.0);
        CHECK(r.n == 56);
    }
}

TEST_CASE("run_all is sorted and independent of the worker count") {
    synth::ScenarioSpec spec;
    spec.n_regions = 30;
    spec.noise_sigma = 0.1;
    spec.association = synth::Association::Independent;
    const auto data = synth::gen_dataset(spec);
    AnalysisConfig cfg;
    cfg.date_range = data.dataset.date_range;
    const auto one = run_all(data.dataset, cfg, {dtw::Band{}, 1});
    const auto four = run_all(data.dataset, cfg, {dtw::Band{}, 4});
    CHECK(one == four);
    CHECK(std::is_sorted(one.begin(), one.end(), [](const auto& a, const auto& b) { return a.region_id < b.region_id; }));

    Dataset empty = data.dataset;
    for (auto& [id, meta] : empty.regions) meta.is_metro = false;
    CHECK(code_of([&] { run_all(empty, cfg); }) == ErrorCode::EmptyAfterFilter);
}

TEST_CASE("lag_sweep") {
    const std::size_t T = 60;
    const V base = wave(T + 5, 13);
    V m(base.begin() + 5, base.end());
    V c(base.begin(), base.begin() + static_cast<long>(T));
    // Cases lag mobility by 5 days: c[t + 5] == m[t].
    for (std::size_t t = 0; t + 5 < T; ++t) c[t + 5] = m[t];
    AnalysisConfig cfg;
    cfg.date_range = DateRange::make(Date::parse("2020-11-23"), Date::parse("2020-11-23") + static_cast<long>(T - 1));
    cfg.smooth_window = 1;
    const auto d = single_region(m, c);

    const auto s = lag_sweep("A", d, cfg, 0, 10);
    CHECK(s.points.size() == 11);
    CHECK(s.best_lag == 5u);
    CHECK(*s.best_distance == 0.0);
    for (std::size_t i = 0; i < s.points.size(); ++i) {
        CHECK(s.points[i].lag_days == i);
        CHECK(s.points[i].n == T - i);
    }

    AnalysisConfig at5 = cfg;
    at5.lag_days = 5;
    CHECK(*run_region("A", d, at5).dtw_distance == *s.points[5].dtw_distance);

    const auto same = lag_sweep("A", single_region(m, m), cfg, 0, 3);
    CHECK(same.best_lag == 0u);
    CHECK(code_of([&] { lag_sweep("A", d, cfg, 0, T); }) == ErrorCode::LagTooLarge);
    CHECK(code_of([&] { lag_sweep("A", d, cfg, 4, 3); }) == ErrorCode::LagTooLarge);
}
