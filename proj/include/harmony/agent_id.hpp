#pragma once

#include <compare>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

namespace harmony {

/// Opaque agent identifier. Non-empty, no ASCII control characters;
/// compared by exact byte equality.
class AgentId {
public:
    AgentId() = delete;
    explicit AgentId(std::string value);
    explicit AgentId(std::string_view value) : AgentId(std::string(value)) {}
    explicit AgentId(const char* value) : AgentId(std::string(value)) {}

    const std::string& str() const noexcept { return value_; }

    friend bool operator==(const AgentId&, const AgentId&) = default;
    friend auto operator<=>(const AgentId&, const AgentId&) = default;

    /// Returns an empty string when `value` is a valid id, else the reason.
    static std::string validate(std::string_view value);

private:
    std::string value_;
};

inline std::ostream& operator<<(std::ostream& os, const AgentId& id) { return os << id.str(); }

/// Unordered pair of distinct agents, stored with first < second.
class AgentPair {
public:
    AgentPair(AgentId a, AgentId b);

    const AgentId& first() const noexcept { return first_; }
    const AgentId& second() const noexcept { return second_; }
    bool contains(const AgentId& id) const noexcept { return id == first_ || id == second_; }
    const AgentId& other(const AgentId& id) const noexcept { return id == first_ ? second_ : first_; }

    friend bool operator==(const AgentPair&, const AgentPair&) = default;
    friend auto operator<=>(const AgentPair&, const AgentPair&) = default;

private:
    AgentId first_;
    AgentId second_;
};

/// Ordered (x, y) with x != y; used for directed edge ratios.
struct OrderedEdge {
    AgentId from;
    AgentId to;

    friend bool operator==(const OrderedEdge&, const OrderedEdge&) = default;
    friend auto operator<=>(const OrderedEdge&, const OrderedEdge&) = default;
};

} // namespace harmony

template <>
struct std::hash<harmony::AgentId> {
    std::size_t operator()(const harmony::AgentId& id) const noexcept { return std::hash<std::string>{}(id.str()); }
};
