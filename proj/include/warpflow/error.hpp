#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace warpflow {

/// Every failure the library reports carries one of these codes so callers
/// (and the CLI exit-code mapping) can branch without parsing messages.
enum class ErrorCode {
    // ingest
    Io,
    MissingColumn,
    MalformedRow,
    DuplicateRegion,
    NonPositivePopulation,
    NonPositiveArea,
    UnknownRegion,
    NegativeCount,
    DevicesExceedTotal,
    BadDate,
    MissingDates,
    DuplicateDate,
    NegativeCases,
    // mobility
    ZeroDevices,
    WindowTooLarge,
    // preprocess
    EmptyAfterFilter,
    LagTooLarge,
    DegenerateSeries,
    // dtw
    EmptySeries,
    InfeasibleBand,
    TooLarge,
    // analysis
    LengthMismatch,
    ZeroVariance,
    ZeroSpread,
    // config / synth
    UnknownKey,
    TypeMismatch,
    InvalidConfig,
    InvalidSpec,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace warpflow
