#include "warpflow/error.hpp"

namespace warpflow {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::Io: return "Io";
        case ErrorCode::MissingColumn: return "MissingColumn";
        case ErrorCode::MalformedRow: return "MalformedRow";
        case ErrorCode::DuplicateRegion: return "DuplicateRegion";
        case ErrorCode::NonPositivePopulation: return "NonPositivePopulation";
        case ErrorCode::NonPositiveArea: return "NonPositiveArea";
        case ErrorCode::UnknownRegion: return "UnknownRegion";
        case ErrorCode::NegativeCount: return "NegativeCount";
        case ErrorCode::DevicesExceedTotal: return "DevicesExceedTotal";
        case ErrorCode::BadDate: return "BadDate";
        case ErrorCode::MissingDates: return "MissingDates";
        case ErrorCode::DuplicateDate: return "DuplicateDate";
        case ErrorCode::NegativeCases: return "NegativeCases";
        case ErrorCode::ZeroDevices: return "ZeroDevices";
        case ErrorCode::WindowTooLarge: return "WindowTooLarge";
        case ErrorCode::EmptyAfterFilter: return "EmptyAfterFilter";
        case ErrorCode::LagTooLarge: return "LagTooLarge";
        case ErrorCode::DegenerateSeries: return "DegenerateSeries";
        case ErrorCode::EmptySeries: return "EmptySeries";
        case ErrorCode::InfeasibleBand: return "InfeasibleBand";
        case ErrorCode::TooLarge: return "TooLarge";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::ZeroVariance: return "ZeroVariance";
        case ErrorCode::ZeroSpread: return "ZeroSpread";
        case ErrorCode::UnknownKey: return "UnknownKey";
        case ErrorCode::TypeMismatch: return "TypeMismatch";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::InvalidSpec: return "InvalidSpec";
    }
    return "Unknown";
}

}  // namespace warpflow
