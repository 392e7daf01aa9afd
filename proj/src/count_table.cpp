#include "harmony/count_table.hpp"

#include <algorithm>
#include <future>
#include <limits>

#include "harmony/errors.hpp"

namespace harmony {

namespace {

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t out;
    if (__builtin_add_overflow(a, b, &out)) {
        throw Error(ErrorCode::Overflow, "counter overflow", {{"a", a}, {"b", b}});
    }
    return out;
}

void add_into(Tally& dst, Tally src) {
    dst.games = checked_add(dst.games, src.games);
    dst.wins = checked_add(dst.wins, src.wins);
}

} // namespace

void CountTable::add_side(std::span<const AgentId> roster, bool won) {
    const Tally one{1, won ? 1u : 0u};
    add_total_sides(1);
    for (std::size_t i = 0; i < roster.size(); ++i) {
        add_into(agents_[roster[i]], one);
        for (std::size_t j = i + 1; j < roster.size(); ++j) {
            add_into(pairs_[AgentPair(roster[i], roster[j])], one);
        }
    }
}

void CountTable::add_match(const MatchRecord& record) {
    add_side(record.winners, true);
    add_side(record.losers, false);
}

void CountTable::add_agent(const AgentId& id, Tally tally) { add_into(agents_[id], tally); }

void CountTable::add_pair(const AgentPair& pair, Tally tally) { add_into(pairs_[pair], tally); }

void CountTable::add_total_sides(std::uint64_t n) { total_sides_ = checked_add(total_sides_, n); }

void CountTable::validate() const {
    for (const auto& [id, t] : agents_) {
        if (t.wins > t.games) {
            throw Error(ErrorCode::InvalidArgument, "agent wins exceed games", {{"agent", id.str()}});
        }
    }
    for (const auto& [p, t] : pairs_) {
        if (t.wins > t.games) {
            throw Error(ErrorCode::InvalidArgument, "pair wins exceed games",
                        {{"a", p.first().str()}, {"b", p.second().str()}});
        }
        const Tally a = agent(p.first());
        const Tally b = agent(p.second());
        if (t.games > std::min(a.games, b.games) || t.wins > std::min(a.wins, b.wins)) {
            throw Error(ErrorCode::InvalidArgument, "pair counters exceed member counters",
                        {{"a", p.first().str()}, {"b", p.second().str()}});
        }
    }
}

Tally CountTable::agent(const AgentId& id) const {
    auto it = agents_.find(id);
    return it == agents_.end() ? Tally{} : it->second;
}

Tally CountTable::pair(const AgentPair& p) const {
    auto it = pairs_.find(p);
    return it == pairs_.end() ? Tally{} : it->second;
}

Tally CountTable::pair(const AgentId& a, const AgentId& b) const { return pair(AgentPair(a, b)); }

std::vector<AgentId> CountTable::agent_ids() const {
    std::vector<AgentId> ids;
    ids.reserve(agents_.size());
    for (const auto& [id, t] : agents_) {
        ids.push_back(id);
    }
    return ids;
}

CountTable merge_counts(const CountTable& a, const CountTable& b) {
    CountTable out = a;
    for (const auto& [id, t] : b.agents()) {
        out.add_agent(id, t);
    }
    for (const auto& [p, t] : b.pairs()) {
        out.add_pair(p, t);
    }
    out.add_total_sides(b.total_sides());
    return out;
}

CountTable accumulate_counts(std::span<const MatchRecord> records) {
    CountAccumulator acc;
    for (const auto& r : records) {
        acc.add(r);
    }
    return acc.finish();
}

CountTable accumulate_counts_sharded(std::span<const MatchRecord> records, std::size_t shards) {
    shards = std::max<std::size_t>(1, std::min(shards, records.size()));
    if (shards <= 1) {
        return accumulate_counts(records);
    }
    std::vector<std::future<CountTable>> parts;
    const std::size_t chunk = (records.size() + shards - 1) / shards;
    for (std::size_t begin = 0; begin < records.size(); begin += chunk) {
        auto slice = records.subspan(begin, std::min(chunk, records.size() - begin));
        parts.push_back(std::async(std::launch::async, [slice] { return accumulate_counts(slice); }));
    }
    CountTable out;
    for (auto& f : parts) {
        out = merge_counts(out, f.get());
    }
    return out;
}

std::uint32_t CountAccumulator::intern(const AgentId& id) {
    auto [it, inserted] = index_.try_emplace(id.str(), static_cast<std::uint32_t>(names_.size()));
    if (inserted) {
        names_.push_back(id);
        agents_.push_back({});
    }
    return it->second;
}

void CountAccumulator::add_side(const std::vector<AgentId>& roster, bool won) {
    const Tally one{1, won ? 1u : 0u};
    scratch_.clear();
    for (const auto& id : roster) {
        scratch_.push_back(intern(id));
    }
    for (std::size_t i = 0; i < scratch_.size(); ++i) {
        add_into(agents_[scratch_[i]], one);
        for (std::size_t j = i + 1; j < scratch_.size(); ++j) {
            const std::uint64_t lo = std::min(scratch_[i], scratch_[j]);
            const std::uint64_t hi = std::max(scratch_[i], scratch_[j]);
            add_into(pairs_[(lo << 32) | hi], one);
        }
    }
    ++sides_;
}

void CountAccumulator::add(const MatchRecord& record) {
    add_side(record.winners, true);
    add_side(record.losers, false);
}

CountTable CountAccumulator::finish() const {
    CountTable out;
    for (std::size_t i = 0; i < names_.size(); ++i) {
        out.add_agent(names_[i], agents_[i]);
    }
    for (const auto& [key, t] : pairs_) {
        out.add_pair(AgentPair(names_[key >> 32], names_[key & 0xffffffffu]), t);
    }
    out.add_total_sides(sides_);
    return out;
}

} // namespace harmony
