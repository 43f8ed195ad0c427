#include "warpflow/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "warpflow/error.hpp"

namespace warpflow::cli {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::size_t to_size(std::string_view key, std::string_view value) {
    std::size_t out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (value.empty() || ec != std::errc{} || ptr != value.data() + value.size()) {
        throw Error(ErrorCode::TypeMismatch,
                    fmt::format("'{}' expects a non-negative integer, got '{}'", key, value));
    }
    return out;
}

bool to_bool(std::string_view key, std::string_view value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw Error(ErrorCode::TypeMismatch, fmt::format("'{}' expects true or false, got '{}'", key, value));
}

Date to_date(std::string_view key, std::string_view value) {
    try {
        return Date::parse(value);
    } catch (const Error&) {
        throw Error(ErrorCode::TypeMismatch, fmt::format("'{}' expects a YYYY-MM-DD date, got '{}'", key, value));
    }
}

std::string quote_value(std::string_view text) {
    std::string out = "\"";
    for (char c : text) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

}  // namespace

const std::vector<std::string_view>& config_keys() {
    static const std::vector<std::string_view> keys{
        "regions", "flows",   "cases",          "out",          "lag",          "window",
        "start",   "end",     "metro-only",     "min-case-filter", "resmooth-cases", "fill-missing",
        "band-radius", "workers", "lag-min",    "lag-max",      "export-mobility"};
    return keys;
}

Settings parse_config_text(std::string_view text, std::string_view source) {
    Settings out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;

        // Strip a trailing comment unless the '#' sits inside quotes.
        bool in_quotes = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) in_quotes = !in_quotes;
            if (line[i] == '#' && !in_quotes) {
                line = line.substr(0, i);
                break;
            }
        }
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorCode::InvalidConfig, fmt::format("{}:{}: expected 'key = value'", source, line_no));
        }
        const std::string key(trim(line.substr(0, eq)));
        std::string_view raw = trim(line.substr(eq + 1));
        std::string value;
        if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"') {
            raw = raw.substr(1, raw.size() - 2);
            for (std::size_t i = 0; i < raw.size(); ++i) {
                if (raw[i] == '\\' && i + 1 < raw.size()) ++i;
                value += raw[i];
            }
        } else {
            value = std::string(raw);
        }
        const auto& keys = config_keys();
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            throw Error(ErrorCode::UnknownKey, fmt::format("{}:{}: unknown key '{}'", source, line_no, key));
        }
        out.emplace_back(key, std::move(value));
        if (eol == text.size()) break;
    }
    return out;
}

void apply_setting(RunConfig& c, std::string_view key, std::string_view value) {
    if (key == "regions") c.inputs.regions = std::string(value);
    else if (key == "flows") c.inputs.flows = std::string(value);
    else if (key == "cases") c.inputs.cases = std::string(value);
    else if (key == "out") c.out_dir = std::string(value);
    else if (key == "lag") c.analysis.lag_days = to_size(key, value);
    else if (key == "window") c.analysis.smooth_window = to_size(key, value);
    else if (key == "start") c.analysis.date_range.first = to_date(key, value);
    else if (key == "end") c.analysis.date_range.last = to_date(key, value);
    else if (key == "metro-only") c.analysis.metro_only = to_bool(key, value);
    else if (key == "min-case-filter") c.analysis.min_case_filter = CaseFilter::parse(value);
    else if (key == "resmooth-cases") c.analysis.resmooth_cases = to_bool(key, value);
    else if (key == "fill-missing") c.fill_missing = parse_fill_policy(value);
    else if (key == "band-radius") c.band = value == "none" ? dtw::Band::none() : dtw::Band::sakoe_chiba(to_size(key, value));
    else if (key == "workers") c.workers = to_size(key, value);
    else if (key == "lag-min") c.lag_min = to_size(key, value);
    else if (key == "lag-max") c.lag_max = to_size(key, value);
    else if (key == "export-mobility") c.export_mobility = to_bool(key, value);
    else throw Error(ErrorCode::UnknownKey, fmt::format("unknown key '{}'", key));
}

RunConfig load_config(const std::optional<std::filesystem::path>& file, const Settings& flags) {
    RunConfig config;
    if (file) {
        std::ifstream in(*file);
        if (!in) throw Error(ErrorCode::InvalidConfig, fmt::format("cannot read config file '{}'", file->string()));
        std::ostringstream text;
        text << in.rdbuf();
        for (const auto& [k, v] : parse_config_text(text.str(), file->string())) apply_setting(config, k, v);
    }
    for (const auto& [k, v] : flags) apply_setting(config, k, v);
    return config;
}

void validate(const RunConfig& c) {
    const auto& a = c.analysis;
    if (a.date_range.last < a.date_range.first) {
        throw Error(ErrorCode::InvalidConfig, fmt::format("end {} precedes start {}", a.date_range.last.iso(),
                                                          a.date_range.first.iso()));
    }
    const std::size_t days = a.date_range.days();
    if (a.smooth_window < 1 || a.smooth_window > days) {
        throw Error(ErrorCode::InvalidConfig, fmt::format("window must be in 1..{}, got {}", days, a.smooth_window));
    }
    if (a.lag_days >= days) {
        throw Error(ErrorCode::LagTooLarge, fmt::format("lag {} must be less than the {} days in the study period",
                                                        a.lag_days, days));
    }
}

std::string format_config(const RunConfig& c) {
    const auto& a = c.analysis;
    std::string out;
    auto line = [&](std::string_view k, const std::string& v) { out += fmt::format("{} = {}\n", k, v); };
    line("regions", quote_value(c.inputs.regions.string()));
    line("flows", quote_value(c.inputs.flows.string()));
    line("cases", quote_value(c.inputs.cases.string()));
    line("start", quote_value(a.date_range.first.iso()));
    line("end", quote_value(a.date_range.last.iso()));
    line("lag", std::to_string(a.lag_days));
    line("window", std::to_string(a.smooth_window));
    line("metro-only", a.metro_only ? "true" : "false");
    line("min-case-filter", quote_value(a.min_case_filter.str()));
    line("resmooth-cases", a.resmooth_cases ? "true" : "false");
    line("fill-missing", quote_value(std::string(to_string(c.fill_missing))));
    line("band-radius", c.band.kind == dtw::Band::Kind::None ? quote_value("none") : std::to_string(c.band.radius));
    line("lag-min", std::to_string(c.lag_min));
    line("lag-max", std::to_string(c.lag_max));
    line("export-mobility", c.export_mobility ? "true" : "false");
    return out;
}

}  // namespace warpflow::cli
