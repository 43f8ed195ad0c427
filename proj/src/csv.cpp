#include "warpflow/csv.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <limits>

#include <fmt/format.h>

#include "warpflow/error.hpp"

namespace warpflow::csv {

std::vector<std::string> split_line(std::string_view line) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                current += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else {
            current += c;
        }
    }
    fields.push_back(std::move(current));
    return fields;
}

std::string quote(std::string_view field) {
    if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string format_number(double value) {
    if (value == 0.0) return "0";  // also folds -0
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

Reader::Reader(std::istream& in, std::string source, const std::vector<std::string_view>& required)
    : in_(in), source_(std::move(source)) {
    std::string header;
    if (!std::getline(in_, header)) {
        throw Error(ErrorCode::MissingColumn, fmt::format("{}: empty file, expected a header row", source_));
    }
    ++line_no_;
    if (!header.empty() && header.back() == '\r') header.pop_back();
    if (header.starts_with("\xEF\xBB\xBF")) header.erase(0, 3);
    const auto names = split_line(header);
    width_ = names.size();
    column_of_.assign(required.size(), std::numeric_limits<std::size_t>::max());
    std::vector<bool> used(names.size(), false);
    for (std::size_t r = 0; r < required.size(); ++r) {
        for (std::size_t c = 0; c < names.size(); ++c) {
            if (names[c] == required[r]) {
                column_of_[r] = c;
                used[c] = true;
                break;
            }
        }
        if (column_of_[r] == std::numeric_limits<std::size_t>::max()) {
            throw Error(ErrorCode::MissingColumn,
                        fmt::format("{}:1: header lacks required column '{}'", source_, required[r]));
        }
    }
    for (std::size_t c = 0; c < names.size(); ++c) {
        if (!used[c]) ignored_.push_back(names[c]);
    }
}

bool Reader::next() {
    std::string line;
    while (std::getline(in_, line)) {
        ++line_no_;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        row_ = split_line(line);
        if (row_.size() != width_) {
            throw Error(ErrorCode::MalformedRow,
                        fmt::format("{}: expected {} fields, found {}", where(), width_, row_.size()));
        }
        return true;
    }
    return false;
}

const std::string& Reader::field(std::size_t required_index) const { return row_.at(column_of_.at(required_index)); }

std::string Reader::where() const { return fmt::format("{}:{}", source_, line_no_); }

double parse_double(std::string_view text, const std::string& where, std::string_view column) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
        throw Error(ErrorCode::MalformedRow, fmt::format("{}: column '{}' value '{}' is not a number", where, column, text));
    }
    return value;
}

long long parse_integer(std::string_view text, const std::string& where, std::string_view column) {
    long long value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
        throw Error(ErrorCode::MalformedRow,
                    fmt::format("{}: column '{}' value '{}' is not an integer", where, column, text));
    }
    return value;
}

bool parse_bool(std::string_view text, const std::string& where, std::string_view column) {
    if (text == "true" || text == "1" || text == "TRUE" || text == "True") return true;
    if (text == "false" || text == "0" || text == "FALSE" || text == "False") return false;
    throw Error(ErrorCode::MalformedRow, fmt::format("{}: column '{}' value '{}' is not a boolean", where, column, text));
}

}  // namespace warpflow::csv
