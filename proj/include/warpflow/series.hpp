#pragma once

#include <string>
#include <vector>

#include "warpflow/date.hpp"

namespace warpflow {

/// Region-tagged daily values; values[i] belongs to start + i days.
struct DailySeries {
    std::string region_id;
    Date start;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    Date end() const { return start + static_cast<long>(values.size()) - 1; }

    bool operator==(const DailySeries&) const = default;
};

}  // namespace warpflow
