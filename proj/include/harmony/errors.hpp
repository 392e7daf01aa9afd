#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

namespace harmony {

enum class ErrorCode {
    InvalidArgument,   // caller violated a precondition
    InsufficientData,  // a required denominator or sample is zero / missing
    BelowThreshold,    // pair filtered by min_shared_games
    NotFound,          // unknown agent or pair
    Parse,             // malformed input
    Io,                // unreadable/unwritable file
    Overflow,          // counter overflow
    GuardExceeded,     // enumeration too large
    Infeasible,        // search found no admissible team
};

std::string_view to_string(ErrorCode code) noexcept;

/// Base exception for the library. `detail` carries a structured diagnostic
/// payload that the CLI and the service both serialize verbatim.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, nlohmann::json detail = nlohmann::json::object())
        : std::runtime_error(message), code_(code), detail_(std::move(detail)) {}

    ErrorCode code() const noexcept { return code_; }
    const nlohmann::json& detail() const noexcept { return detail_; }

    /// {"error": code, "message": ..., "detail": {...}}
    nlohmann::json to_json() const;

private:
    ErrorCode code_;
    nlohmann::json detail_;
};

} // namespace harmony
