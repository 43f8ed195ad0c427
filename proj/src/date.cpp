#include "warpflow/date.hpp"

#include <charconv>

#include <fmt/format.h>

#include "warpflow/error.hpp"

namespace warpflow {

namespace {

bool parse_digits(std::string_view text, int& out) {
    for (char c : text) {
        if (c < '0' || c > '9') return false;
    }
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

}  // namespace

Date Date::from_ymd(int y, unsigned m, unsigned d) {
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
    if (!ymd.ok()) {
        throw Error(ErrorCode::BadDate, fmt::format("invalid calendar date {:04d}-{:02d}-{:02d}", y, m, d));
    }
    return Date{std::chrono::sys_days{ymd}};
}

Date Date::parse(std::string_view text) {
    int y = 0, m = 0, d = 0;
    if (text.size() != 10 || text[4] != '-' || text[7] != '-' || !parse_digits(text.substr(0, 4), y) ||
        !parse_digits(text.substr(5, 2), m) || !parse_digits(text.substr(8, 2), d)) {
        throw Error(ErrorCode::BadDate, fmt::format("'{}' is not an ISO-8601 date (YYYY-MM-DD)", text));
    }
    return from_ymd(y, static_cast<unsigned>(m), static_cast<unsigned>(d));
}

std::string Date::iso() const {
    const std::chrono::year_month_day ymd{sys()};
    return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                       static_cast<unsigned>(ymd.day()));
}

DateRange DateRange::make(Date first, Date last) {
    if (last < first) {
        throw Error(ErrorCode::InvalidConfig,
                    fmt::format("date range end {} precedes start {}", last.iso(), first.iso()));
    }
    return DateRange{first, last};
}

}  // namespace warpflow
