#include <doctest.h>

#include "test_support.hpp"
#include "warpflow/config.hpp"
#include "warpflow/error.hpp"

using namespace warpflow;
using namespace warpflow::cli;

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

}  // namespace

TEST_CASE("defaults") {
    const auto c = load_config(std::nullopt);
    CHECK(c.analysis.lag_days == 7);
    CHECK(c.analysis.smooth_window == 7);
    CHECK(c.analysis.metro_only);
    CHECK_FALSE(c.analysis.resmooth_cases);
    CHECK(c.analysis.min_case_filter.str() == "median");
    CHECK(c.analysis.date_range.first.iso() == "2020-11-30");
    CHECK(c.analysis.date_range.last.iso() == "2021-01-24");
    CHECK(c.fill_missing == FillPolicy::Error);
    CHECK(c.band.kind == dtw::Band::Kind::None);
    CHECK(c.lag_min == 0);
    CHECK(c.lag_max == 30);
}

TEST_CASE("flags override the config file") {
    testing::TempDir dir("config");
    testing::write_file(dir / "c.conf", "# study\nlag = 7\nwindow = 5\ncases = \"my cases.csv\"\n\nmetro-only = false  # all\n");
    const auto c = load_config(dir / "c.conf", {{"lag", "14"}});
    CHECK(c.analysis.lag_days == 14);
    CHECK(c.analysis.smooth_window == 5);
    CHECK_FALSE(c.analysis.metro_only);
    CHECK(c.inputs.cases == "my cases.csv");
}

TEST_CASE("config errors") {
    try {
        parse_config_text("lag = 3\nlagg = 4\n");
        FAIL("expected UnknownKey");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnknownKey);
        CHECK(std::string(e.what()).find("lagg") != std::string::npos);
    }
    CHECK(code_of([] { parse_config_text("just words\n"); }) == ErrorCode::InvalidConfig);

    RunConfig c;
    CHECK(code_of([&] { apply_setting(c, "lag", "seven"); }) == ErrorCode::TypeMismatch);
    CHECK(code_of([&] { apply_setting(c, "lag", "-1"); }) == ErrorCode::TypeMismatch);
    CHECK(code_of([&] { apply_setting(c, "metro-only", "maybe"); }) == ErrorCode::TypeMismatch);
    CHECK(code_of([&] { apply_setting(c, "start", "2020-13-01"); }) == ErrorCode::TypeMismatch);
    CHECK(code_of([&] { apply_setting(c, "fill-missing", "guess"); }) == ErrorCode::TypeMismatch);
    CHECK(code_of([&] { apply_setting(c, "colour", "1"); }) == ErrorCode::UnknownKey);

    apply_setting(c, "band-radius", "3");
    CHECK(c.band.kind == dtw::Band::Kind::SakoeChiba);
    CHECK(c.band.radius == 3);
    apply_setting(c, "min-case-filter", "2.5");
    CHECK(c.analysis.min_case_filter.str() == "2.5");
}

TEST_CASE("validate") {
    auto c = load_config(std::nullopt);
    validate(c);
    c.analysis.lag_days = 56;
    CHECK(code_of([&] { validate(c); }) == ErrorCode::LagTooLarge);
    c = load_config(std::nullopt, {{"start", "2021-01-24"}, {"end", "2020-11-30"}});
    CHECK(code_of([&] { validate(c); }) == ErrorCode::InvalidConfig);
}

TEST_CASE("format_config round-trips") {
    const auto c = load_config(std::nullopt, {{"lag", "10"},
                                              {"window", "3"},
                                              {"regions", "a b/regions.csv"},
                                              {"min-case-filter", "12.5"},
                                              {"band-radius", "4"},
                                              {"fill-missing", "previous"},
                                              {"resmooth-cases", "true"},
                                              {"start", "2020-12-01"}});
    const auto text = format_config(c);
    testing::TempDir dir("config_rt");
    testing::write_file(dir / "c.conf", text);
    const auto back = load_config(dir / "c.conf");
    CHECK(format_config(back) == text);
    CHECK(back.analysis.lag_days == 10);
    CHECK(back.inputs.regions == "a b/regions.csv");
    CHECK(back.fill_missing == FillPolicy::Previous);
    CHECK(text.find("workers") == std::string::npos);
    CHECK(text.find("out =") == std::string::npos);
}
