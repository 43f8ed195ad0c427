#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace warpflow::csv {

/// Splits one CSV line. Double-quoted fields may contain commas and `""`.
std::vector<std::string> split_line(std::string_view line);

/// Quotes a field only when it needs it.
std::string quote(std::string_view field);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_number(double value);

/// A header-indexed reader. Columns are located by name; extra columns are
/// reported through `ignored_columns()`.
class Reader {
public:
    Reader(std::istream& in, std::string source, const std::vector<std::string_view>& required);

    /// Advances to the next non-empty row. Returns false at EOF.
    bool next();

    const std::string& field(std::size_t required_index) const;
    std::size_t line_number() const { return line_no_; }
    const std::string& source() const { return source_; }
    const std::vector<std::string>& ignored_columns() const { return ignored_; }

    /// "<source>:<line>" for error messages.
    std::string where() const;

private:
    std::istream& in_;
    std::string source_;
    std::vector<std::size_t> column_of_;
    std::vector<std::string> ignored_;
    std::vector<std::string> row_;
    std::size_t width_ = 0;
    std::size_t line_no_ = 0;
};

double parse_double(std::string_view text, const std::string& where, std::string_view column);
long long parse_integer(std::string_view text, const std::string& where, std::string_view column);
bool parse_bool(std::string_view text, const std::string& where, std::string_view column);

}  // namespace warpflow::csv
