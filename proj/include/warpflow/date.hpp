#pragma once

#include <chrono>
#include <compare>
#include <string>
#include <string_view>

namespace warpflow {

/// A calendar day. Stored as days since 1970-01-01 so that arithmetic and
/// ordering are plain integer operations.
class Date {
public:
    constexpr Date() = default;
    constexpr explicit Date(std::chrono::sys_days d) : days_(d.time_since_epoch().count()) {}

    /// Parses strict ISO-8601 `YYYY-MM-DD`. Throws Error(BadDate).
    static Date parse(std::string_view text);
    static Date from_ymd(int y, unsigned m, unsigned d);

    std::string iso() const;
    constexpr std::chrono::sys_days sys() const { return std::chrono::sys_days{std::chrono::days{days_}}; }
    constexpr long serial() const { return days_; }

    constexpr Date operator+(long n) const { return from_serial(days_ + n); }
    constexpr Date operator-(long n) const { return from_serial(days_ - n); }
    constexpr long operator-(Date other) const { return days_ - other.days_; }

    constexpr auto operator<=>(const Date&) const = default;

private:
    static constexpr Date from_serial(long s) {
        Date d;
        d.days_ = s;
        return d;
    }
    long days_ = 0;
};

/// Inclusive [first, last] range of days.
struct DateRange {
    Date first;
    Date last;

    /// Throws Error(InvalidConfig) if last < first.
    static DateRange make(Date first, Date last);

    std::size_t days() const { return static_cast<std::size_t>(last - first + 1); }
    bool contains(Date d) const { return first <= d && d <= last; }
    std::size_t index_of(Date d) const { return static_cast<std::size_t>(d - first); }

    bool operator==(const DateRange&) const = default;
};

}  // namespace warpflow
