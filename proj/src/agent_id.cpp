#include "harmony/agent_id.hpp"

#include "harmony/errors.hpp"

namespace harmony {

std::string AgentId::validate(std::string_view value) {
    if (value.empty()) {
        return "empty agent id";
    }
    for (unsigned char c : value) {
        if (c < 0x20 || c == 0x7f) {
            return "control character in agent id";
        }
    }
    return {};
}

AgentId::AgentId(std::string value) : value_(std::move(value)) {
    if (auto reason = validate(value_); !reason.empty()) {
        throw Error(ErrorCode::InvalidArgument, reason, {{"id", value_}});
    }
}

AgentPair::AgentPair(AgentId a, AgentId b) : first_(std::move(a)), second_(std::move(b)) {
    if (first_ == second_) {
        throw Error(ErrorCode::InvalidArgument, "pair of identical agents", {{"id", first_.str()}});
    }
    if (second_ < first_) {
        std::swap(first_, second_);
    }
}

} // namespace harmony
