#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "harmony/agent_id.hpp"
#include "harmony/match.hpp"

namespace harmony {

struct Tally {
    std::uint64_t games = 0;
    std::uint64_t wins = 0;

    friend bool operator==(const Tally&, const Tally&) = default;
};

/// Mergeable per-agent and per-pair (games, wins) counters. Each match
/// contributes two observations, one per side; only same-side pairs are
/// counted.
class CountTable {
public:
    using AgentMap = std::map<AgentId, Tally>;
    using PairMap = std::map<AgentPair, Tally>;

    /// Adds one side of a match.
    void add_side(std::span<const AgentId> roster, bool won);
    void add_match(const MatchRecord& record);

    /// Raw counter insertion (snapshot loading, constructed fixtures).
    /// Adds to any existing counters; throws on overflow.
    void add_agent(const AgentId& id, Tally tally);
    void add_pair(const AgentPair& pair, Tally tally);
    void add_total_sides(std::uint64_t n);

    /// Throws Error(InvalidArgument) naming the first violated invariant.
    void validate() const;

    bool has_agent(const AgentId& id) const { return agents_.contains(id); }
    Tally agent(const AgentId& id) const;
    /// Zero tally when the pair never shared a side.
    Tally pair(const AgentId& a, const AgentId& b) const;
    Tally pair(const AgentPair& p) const;

    const AgentMap& agents() const noexcept { return agents_; }
    const PairMap& pairs() const noexcept { return pairs_; }
    std::uint64_t total_sides() const noexcept { return total_sides_; }
    bool empty() const noexcept { return agents_.empty() && pairs_.empty() && total_sides_ == 0; }

    std::vector<AgentId> agent_ids() const;

    friend bool operator==(const CountTable&, const CountTable&) = default;

private:
    AgentMap agents_;
    PairMap pairs_;
    std::uint64_t total_sides_ = 0;
};

/// Pointwise sum. Throws Error(Overflow) instead of wrapping.
CountTable merge_counts(const CountTable& a, const CountTable& b);

CountTable accumulate_counts(std::span<const MatchRecord> records);

/// Splits `records` into `shards` contiguous ranges, accumulates them on
/// separate threads and merges the partial tables.
CountTable accumulate_counts_sharded(std::span<const MatchRecord> records, std::size_t shards);

/// Faster accumulation path used by ingestion: agents are interned to
/// dense indices and pairs kept in a hash map until `finish()`.
class CountAccumulator {
public:
    void add(const MatchRecord& record);
    CountTable finish() const;

private:
    std::uint32_t intern(const AgentId& id);
    void add_side(const std::vector<AgentId>& roster, bool won);

    std::unordered_map<std::string, std::uint32_t> index_;
    std::vector<AgentId> names_;
    std::vector<Tally> agents_;
    std::vector<std::uint32_t> scratch_;
    std::unordered_map<std::uint64_t, Tally> pairs_;
    std::uint64_t sides_ = 0;
};

} // namespace harmony
