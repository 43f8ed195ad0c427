#include "warpflow/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "warpflow/error.hpp"
#include "warpflow/mobility.hpp"

namespace warpflow::synth {

using nlohmann::ordered_json;

namespace {

// Stream ids. Changing these changes every golden file.
enum : std::uint64_t { kAttributes = 1, kMobility = 2, kCases = 3, kIndependent = 4, kSplits = 5 };

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

struct RegionAttributes {
    std::int64_t population = 0;
    double land_area = 0.0;
    std::int64_t panel_devices = 0;
};

RegionAttributes region_attributes(const ScenarioSpec& spec, std::size_t index) {
    Stream rng(spec.seed, index, kAttributes);
    RegionAttributes a;
    a.population = static_cast<std::int64_t>(std::llround(std::exp(rng.uniform(std::log(5.0e4), std::log(3.0e6)))));
    a.land_area = std::round(rng.uniform(50.0, 2500.0) * 10.0) / 10.0;
    const double rate = rng.uniform(0.03, 0.08);
    a.panel_devices = std::max<std::int64_t>(1, std::llround(static_cast<double>(a.population) * rate));
    return a;
}

struct Wave {
    double baseline = 0.0;
    double amplitude = 0.0;
    double period = 0.0;
    double phase = 0.0;
};

Wave draw_wave(Stream& rng, double population) {
    Wave w;
    w.baseline = population * rng.uniform(0.2, 0.4);
    w.amplitude = w.baseline * rng.uniform(0.15, 0.35);
    w.period = rng.uniform(18.0, 40.0);
    w.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    return w;
}

std::vector<double> render_wave(const Wave& w, Stream& rng, std::size_t n_days, double noise_sigma) {
    std::vector<double> out(n_days);
    for (std::size_t t = 0; t < n_days; ++t) {
        double v = w.baseline + w.amplitude * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / w.period + w.phase);
        if (noise_sigma > 0.0) v += noise_sigma * w.amplitude * rng.normal();
        out[t] = std::max(v, 0.05 * w.baseline);
    }
    return out;
}

template <typename T>
T take(ordered_json& obj, const char* key, T fallback) {
    auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    T value = it->template get<T>();
    obj.erase(it);
    return value;
}

template <typename T>
std::optional<T> take_opt(ordered_json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) return std::nullopt;
    T value = it->template get<T>();
    obj.erase(it);
    return value;
}

void reject_leftovers(const ordered_json& obj, std::string_view where) {
    if (!obj.empty()) {
        throw Error(ErrorCode::InvalidSpec, fmt::format("{}: unknown key '{}'", where, obj.begin().key()));
    }
}

}  // namespace

std::string_view to_string(Association a) noexcept {
    switch (a) {
        case Association::LaggedCopy: return "lagged_copy";
        case Association::LaggedScaled: return "lagged_scaled";
        case Association::Independent: return "independent";
        case Association::Inverse: return "inverse";
    }
    return "lagged_copy";
}

Association parse_association(std::string_view text) {
    for (auto a : {Association::LaggedCopy, Association::LaggedScaled, Association::Independent, Association::Inverse}) {
        if (to_string(a) == text) return a;
    }
    throw Error(ErrorCode::InvalidSpec,
                fmt::format("association must be lagged_copy|lagged_scaled|independent|inverse, got '{}'", text));
}

Stream::Stream(std::uint64_t seed, std::uint64_t region_index, std::uint64_t stream_id)
    : engine_(splitmix64(splitmix64(seed) ^ splitmix64((region_index << 8) | stream_id))) {}

double Stream::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Stream::normal() {
    // 1 - u keeps the log argument in (0, 1].
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

void ScenarioSpec::validate() const {
    auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidSpec, msg); };
    if (n_regions < 1 || n_regions > 9999) fail(fmt::format("n_regions must be in 1..9999, got {}", n_regions));
    if (n_days < 1) fail("n_days must be positive");
    if (smooth_window < 1 || smooth_window > n_days) {
        fail(fmt::format("smooth_window must be in 1..n_days, got {}", smooth_window));
    }
    auto check_lag = [&](std::size_t lag) {
        if (lag >= n_days) fail(fmt::format("true_lag {} must be less than n_days {}", lag, n_days));
    };
    auto check_sigma = [&](double s) {
        if (!(s >= 0.0) || !std::isfinite(s)) fail(fmt::format("noise_sigma must be a non-negative number, got {}", s));
    };
    check_lag(true_lag);
    check_sigma(noise_sigma);
    for (const auto& o : overrides) {
        if (o.index >= n_regions) fail(fmt::format("override index {} is out of range", o.index));
        if (o.true_lag) check_lag(*o.true_lag);
        if (o.noise_sigma) check_sigma(*o.noise_sigma);
    }
}

ScenarioSpec ScenarioSpec::from_json_text(const std::string& text) {
    ScenarioSpec spec;
    try {
        ordered_json root = ordered_json::parse(text);
        if (!root.is_object()) throw Error(ErrorCode::InvalidSpec, "scenario spec must be a JSON object");
        spec.n_regions = take(root, "n_regions", spec.n_regions);
        spec.n_days = take(root, "n_days", spec.n_days);
        spec.true_lag = take(root, "true_lag", spec.true_lag);
        spec.association = parse_association(take(root, "association", std::string(to_string(spec.association))));
        spec.noise_sigma = take(root, "noise_sigma", spec.noise_sigma);
        spec.seed = take(root, "seed", spec.seed);
        spec.start_date = Date::parse(take(root, "start_date", spec.start_date.iso()));
        spec.smooth_window = take(root, "smooth_window", spec.smooth_window);
        if (auto it = root.find("overrides"); it != root.end()) {
            for (auto item : *it) {
                RegionOverride o;
                o.index = take<std::size_t>(item, "index", 0);
                if (auto a = take_opt<std::string>(item, "association")) o.association = parse_association(*a);
                o.true_lag = take_opt<std::size_t>(item, "true_lag");
                o.noise_sigma = take_opt<double>(item, "noise_sigma");
                o.degenerate = take_opt<bool>(item, "degenerate");
                o.is_metro = take_opt<bool>(item, "is_metro");
                reject_leftovers(item, "scenario override");
                spec.overrides.push_back(o);
            }
            root.erase(it);
        }
        reject_leftovers(root, "scenario spec");
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidSpec, fmt::format("scenario spec: {}", e.what()));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::InvalidSpec) throw;
        throw Error(ErrorCode::InvalidSpec, fmt::format("scenario spec: {}", e.what()));
    }
    spec.validate();
    return spec;
}

std::string ScenarioSpec::to_json_text() const {
    ordered_json j;
    j["n_regions"] = n_regions;
    j["n_days"] = n_days;
    j["true_lag"] = true_lag;
    j["association"] = std::string(to_string(association));
    j["noise_sigma"] = noise_sigma;
    j["seed"] = seed;
    j["start_date"] = start_date.iso();
    j["smooth_window"] = smooth_window;
    j["overrides"] = ordered_json::array();
    for (const auto& o : overrides) {
        ordered_json item;
        item["index"] = o.index;
        if (o.association) item["association"] = std::string(to_string(*o.association));
        if (o.true_lag) item["true_lag"] = *o.true_lag;
        if (o.noise_sigma) item["noise_sigma"] = *o.noise_sigma;
        if (o.degenerate) item["degenerate"] = *o.degenerate;
        if (o.is_metro) item["is_metro"] = *o.is_metro;
        j["overrides"].push_back(item);
    }
    return j.dump(2) + "\n";
}

std::string region_id_for(std::size_t region_index) { return fmt::format("{:05d}", 90001 + region_index); }

RegionTruth region_truth(const ScenarioSpec& spec, std::size_t region_index) {
    RegionTruth t{region_id_for(region_index), spec.true_lag, spec.association, spec.noise_sigma, false, true};
    for (const auto& o : spec.overrides) {
        if (o.index != region_index) continue;
        if (o.association) t.association = *o.association;
        if (o.true_lag) t.true_lag = *o.true_lag;
        if (o.noise_sigma) t.noise_sigma = *o.noise_sigma;
        if (o.degenerate) t.degenerate = *o.degenerate;
        if (o.is_metro) t.is_metro = *o.is_metro;
    }
    return t;
}

DailySeries gen_mobility_series(const ScenarioSpec& spec, std::size_t region_index) {
    const RegionTruth truth = region_truth(spec, region_index);
    const RegionAttributes attrs = region_attributes(spec, region_index);
    Stream rng(spec.seed, region_index, kMobility);
    Wave wave = draw_wave(rng, static_cast<double>(attrs.population));
    DailySeries out{truth.region_id, spec.start_date, {}};
    if (truth.degenerate) {
        out.values.assign(spec.n_days, wave.baseline);
    } else {
        out.values = render_wave(wave, rng, spec.n_days, truth.noise_sigma);
    }
    return out;
}

DailySeries gen_lagged_cases(const DailySeries& mobility, const ScenarioSpec& spec, std::size_t region_index) {
    const RegionTruth truth = region_truth(spec, region_index);
    Stream rng(spec.seed, region_index, kCases);
    const double scale = rng.uniform(0.002, 0.02);  // drawn unconditionally to keep the stream layout fixed
    const auto& m = mobility.values;
    const std::size_t n = m.size();
    const auto [mn, mx] = std::minmax_element(m.begin(), m.end());
    const double amplitude = (*mx - *mn) / 2.0;

    std::vector<double> base(n);
    if (truth.association == Association::Independent) {
        Stream other(spec.seed, region_index, kIndependent);
        const Wave w = draw_wave(other, std::max(1.0, *mx));
        base = render_wave(w, other, n, 0.0);
    } else {
        for (std::size_t t = 0; t < n; ++t) base[t] = m[t >= truth.true_lag ? t - truth.true_lag : 0];
        if (truth.association == Association::Inverse) {
            for (auto& v : base) v = *mx - v;
        }
    }

    DailySeries cases{mobility.region_id, mobility.start, std::vector<double>(n)};
    const double factor = truth.association == Association::LaggedScaled ? scale : 1.0;
    for (std::size_t t = 0; t < n; ++t) {
        double v = base[t];
        if (truth.noise_sigma > 0.0) v += truth.noise_sigma * amplitude * rng.normal();
        cases.values[t] = std::max(0.0, factor * v);
    }
    return cases;
}

SyntheticDataset gen_dataset(const ScenarioSpec& spec) {
    spec.validate();
    SyntheticDataset out;
    Dataset& ds = out.dataset;
    ds.date_range = DateRange::make(spec.start_date, spec.start_date + static_cast<long>(spec.n_days) - 1);

    std::vector<RegionAttributes> attrs;
    for (std::size_t i = 0; i < spec.n_regions; ++i) {
        out.truth.push_back(region_truth(spec, i));
        attrs.push_back(region_attributes(spec, i));
        RegionMeta meta{out.truth[i].region_id, fmt::format("Synthetic County {:04d}", i + 1), attrs[i].population,
                        attrs[i].land_area, out.truth[i].is_metro};
        ds.regions.emplace(meta.region_id, meta);
    }

    // Each region's mobility is a within flow plus inflows from up to two neighbours.
    for (std::size_t i = 0; i < spec.n_regions; ++i) {
        const DailySeries target = gen_mobility_series(spec, i);
        Stream rng(spec.seed, i, kSplits);
        const double within_share = rng.uniform(0.6, 0.85);
        std::vector<std::size_t> origins{i};
        for (std::size_t k = 1; k <= 2 && k < spec.n_regions; ++k) origins.push_back((i + k) % spec.n_regions);
        const double inflow_share = origins.size() > 1 ? (1.0 - within_share) / static_cast<double>(origins.size() - 1) : 0.0;

        for (std::size_t d = 0; d < spec.n_days; ++d) {
            // Inflows are capped at a tenth of the origin's population; the
            // within flow carries the remainder.
            std::vector<double> persons(origins.size(), 0.0);
            double inflow_total = 0.0;
            for (std::size_t k = 1; k < origins.size(); ++k) {
                const double cap = 0.1 * static_cast<double>(attrs[origins[k]].population);
                persons[k] = std::min(inflow_share * target.values[d], cap);
                inflow_total += persons[k];
            }
            persons[0] = target.values[d] - inflow_total;
            for (std::size_t k = 0; k < origins.size(); ++k) {
                const auto& a = attrs[origins[k]];
                const double devices = persons[k] * static_cast<double>(a.panel_devices) / static_cast<double>(a.population);
                const auto devices_od = std::clamp<std::int64_t>(std::llround(devices), 0, a.panel_devices);
                ds.flows.push_back(FlowRecord{spec.start_date + static_cast<long>(d), out.truth[origins[k]].region_id,
                                              out.truth[i].region_id, devices_od, a.panel_devices});
            }
        }
    }
    std::sort(ds.flows.begin(), ds.flows.end());

    out.mobility = mobility::aggregate_all_mobility(ds.flows, ds.regions, ds.date_range);
    for (std::size_t i = 0; i < spec.n_regions; ++i) {
        const auto& realized = out.mobility.at(out.truth[i].region_id);
        const DailySeries smoothed = mobility::rolling_mean(realized, spec.smooth_window);
        ds.cases.emplace(out.truth[i].region_id, gen_lagged_cases(smoothed, spec, i));
    }
    return out;
}

void write_dataset(const SyntheticDataset& data, const ScenarioSpec& spec, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    auto open = [&](const char* name) {
        std::ofstream f(dir / name, std::ios::binary);
        if (!f) throw Error(ErrorCode::Io, fmt::format("cannot write '{}'", (dir / name).string()));
        return f;
    };
    {
        auto f = open("regions.csv");
        ingest::write_regions(f, data.dataset.regions);
    }
    {
        auto f = open("flows.csv");
        ingest::write_flows(f, data.dataset.flows);
    }
    {
        auto f = open("cases.csv");
        ingest::write_cases(f, data.dataset.cases);
    }
    ordered_json manifest;
    manifest["scenario"] = ordered_json::parse(spec.to_json_text());
    manifest["regions"] = ordered_json::array();
    for (const auto& t : data.truth) {
        manifest["regions"].push_back({{"region_id", t.region_id},
                                       {"true_lag", t.true_lag},
                                       {"association", std::string(to_string(t.association))},
                                       {"noise_sigma", t.noise_sigma},
                                       {"degenerate", t.degenerate},
                                       {"is_metro", t.is_metro}});
    }
    auto f = open("truth.json");
    f << manifest.dump(2) << '\n';
}

}  // namespace warpflow::synth
