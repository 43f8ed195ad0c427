#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "test_support.hpp"
#include "warpflow/error.hpp"
#include "warpflow/mobility.hpp"

using namespace warpflow;
using namespace warpflow::mobility;

namespace {

const DateRange kRange = DateRange::make(Date::parse("2020-12-01"), Date::parse("2020-12-03"));
const Date kDay = kRange.first;

RegionTable two_regions() {
    RegionTable t;
    t.emplace("A", testing::region("A", 1000));
    t.emplace("B", testing::region("B", 500));
    return t;
}

}  // namespace

TEST_CASE("estimate_flow scales devices to persons") {
    CHECK(estimate_flow(10, 1000, 100) == 100.0);
    CHECK(estimate_flow(0, 1000, 100) == 0.0);
    CHECK(estimate_flow(5, 50000, 2000) == 125.0);
    CHECK_THROWS_AS(estimate_flow(1, 1000, 0), Error);
    try {
        estimate_flow(0, 1000, 0);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ZeroDevices);
    }
}

TEST_CASE("estimate_flow is linear in the device count") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::int64_t total = 1 + static_cast<std::int64_t>(rng() % 100000);
        const std::int64_t a = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(total));
        const std::int64_t b = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(total - a + 1));
        const std::int64_t pop = 1 + static_cast<std::int64_t>(rng() % 10000000);
        const double whole = estimate_flow(a + b, pop, total);
        CHECK(whole == doctest::Approx(estimate_flow(a, pop, total) + estimate_flow(b, pop, total)).epsilon(1e-14));
    }
}

TEST_CASE("aggregate sums within and inflow records into the destination") {
    const auto regions = two_regions();
    // A->A: 10*1000/100 = 100, B->A: 10*500/100 = 50, A->B: 7*1000/100 = 70.
    const std::vector<FlowRecord> flows{{kDay, "A", "A", 10, 100}, {kDay, "B", "A", 10, 100}, {kDay, "A", "B", 7, 100}};
    const auto a = aggregate_region_mobility(flows, regions, "A", kRange);
    CHECK(a.values == std::vector<double>{150.0, 0.0, 0.0});
    const auto b = aggregate_region_mobility(flows, regions, "B", kRange);
    CHECK(b.values[0] == 70.0);

    const std::vector<FlowRecord> within{{kDay, "A", "A", 10, 100}};
    CHECK(aggregate_region_mobility(within, regions, "A", kRange).values[0] == 100.0);
    CHECK(aggregate_region_mobility(within, regions, "B", kRange).values[0] == 0.0);

    const auto all = aggregate_all_mobility(flows, regions, kRange);
    CHECK(all.at("A") == a);
    CHECK(all.at("B") == b);
    CHECK_THROWS_AS(aggregate_region_mobility(flows, regions, "Z", kRange), Error);
}

TEST_CASE("aggregation is order-free and conserves mass") {
    std::mt19937_64 rng(17);
    RegionTable regions;
    for (int i = 0; i < 5; ++i) {
        const std::string id = "R" + std::to_string(i);
        regions.emplace(id, testing::region(id, 1000 + static_cast<std::int64_t>(rng() % 900000)));
    }
    const DateRange range = DateRange::make(Date::parse("2020-12-01"), Date::parse("2020-12-14"));
    std::vector<FlowRecord> flows;
    for (int k = 0; k < 400; ++k) {
        const std::int64_t total = 1 + static_cast<std::int64_t>(rng() % 5000);
        flows.push_back({range.first + static_cast<long>(rng() % range.days()), "R" + std::to_string(rng() % 5),
                         "R" + std::to_string(rng() % 5), static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(total + 1)),
                         total});
    }
    const auto base = aggregate_all_mobility(flows, regions, range);
    for (int trial = 0; trial < 20; ++trial) {
        std::shuffle(flows.begin(), flows.end(), rng);
        CHECK(aggregate_all_mobility(flows, regions, range) == base);
        CHECK(aggregate_region_mobility(flows, regions, "R2", range) == base.at("R2"));
    }
    for (const auto& [id, series] : base) {
        double expected = 0.0;
        for (const auto& f : flows) {
            if (f.destination == id) expected += estimate_flow(f.devices_od, regions.at(f.origin).population, f.devices_o);
        }
        const double got = std::accumulate(series.values.begin(), series.values.end(), 0.0);
        CHECK(got == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("splitting a record leaves the aggregate bit-identical") {
    std::mt19937_64 rng(44);
    RegionTable regions;
    regions.emplace("A", testing::region("A", 3'456'789));
    regions.emplace("B", testing::region("B", 987'654));
    std::vector<FlowRecord> flows{{kDay, "A", "B", 123'457, 199'999}, {kDay, "B", "B", 777, 1'001}};
    const auto before = aggregate_region_mobility(flows, regions, "B", kRange);
    for (int trial = 0; trial < 100; ++trial) {
        auto split = flows;
        const auto k = rng() % 2;
        FlowRecord extra = split[k];
        extra.devices_od = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(split[k].devices_od + 1));
        split[k].devices_od -= extra.devices_od;
        split.push_back(extra);
        CHECK(aggregate_region_mobility(split, regions, "B", kRange) == before);
    }
}

TEST_CASE("rolling_mean examples") {
    CHECK(rolling_mean(std::vector<double>{5, 5, 5, 5}, 3) == std::vector<double>{5, 5, 5, 5});
    // Partial windows: 1/1, (1+2)/2, (1+2+3)/3.
    CHECK(rolling_mean(std::vector<double>{1, 2, 3}, 3) == std::vector<double>{1.0, 1.5, 2.0});
    CHECK(rolling_mean(std::vector<double>{1, 2, 3, 4, 5, 6, 7}, 7).back() == 4.0);
    CHECK(rolling_mean(std::vector<double>{1, 2, 3}, 1) == std::vector<double>{1, 2, 3});

    try {
        rolling_mean(std::vector<double>{1, 2}, 3);
        FAIL("expected WindowTooLarge");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::WindowTooLarge);
    }
    CHECK_THROWS_AS(rolling_mean(std::vector<double>{1, 2}, 0), Error);
}

TEST_CASE("rolling_mean matches a direct trailing-window oracle and keeps bounds") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 200; ++trial) {
        const auto v = testing::random_series(rng, 1 + rng() % 60, 0.0, 1e5);
        const std::size_t w = 1 + rng() % v.size();
        const auto out = rolling_mean(v, w);
        REQUIRE(out.size() == v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            double sum = 0.0;
            std::size_t count = 0;
            for (std::size_t k = 0; k < w && k <= i; ++k, ++count) sum += v[i - k];
            CHECK(out[i] == doctest::Approx(sum / static_cast<double>(count)).epsilon(1e-12));
        }
        CHECK(*std::min_element(out.begin(), out.end()) >= *std::min_element(v.begin(), v.end()));
        CHECK(*std::max_element(out.begin(), out.end()) <= *std::max_element(v.begin(), v.end()));

        const std::vector<double> constant(v.size(), v[0]);
        CHECK(rolling_mean(constant, w) == constant);
    }
}

TEST_CASE("rolling_mean keeps series identity") {
    const DailySeries s{"A", kDay, {1, 2, 3, 4}};
    const auto r = rolling_mean(s, 2);
    CHECK(r.region_id == "A");
    CHECK(r.start == kDay);
    CHECK(r.values == std::vector<double>{1, 1.5, 2.5, 3.5});
}
