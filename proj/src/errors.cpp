#include "harmony/errors.hpp"

namespace harmony {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::InsufficientData: return "insufficient_data";
    case ErrorCode::BelowThreshold: return "below_threshold";
    case ErrorCode::NotFound: return "not_found";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::Io: return "io";
    case ErrorCode::Overflow: return "overflow";
    case ErrorCode::GuardExceeded: return "guard_exceeded";
    case ErrorCode::Infeasible: return "infeasible";
    }
    return "unknown";
}

nlohmann::json Error::to_json() const {
    return {{"error", std::string(to_string(code_))}, {"message", what()}, {"detail", detail_}};
}

} // namespace harmony
