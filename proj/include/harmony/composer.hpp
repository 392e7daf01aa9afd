#pragma once

#include <optional>
#include <span>
#include <vector>

#include "harmony/config.hpp"
#include "harmony/count_table.hpp"
#include "harmony/harmony_index.hpp"

namespace harmony {

struct TeamSearchResult {
    std::vector<AgentId> team;
    TeamAssessment assessment;
    std::uint64_t evaluated = 0;
    /// Pool agents without a single qualifying edge to any other pool member.
    std::vector<AgentId> unusable_agents;
};

inline constexpr std::uint64_t kExhaustiveGuard = 1'000'000;

/// Maximizes the strict team index over all k-subsets of `pool`; ties go to
/// the lexicographically smaller roster. Throws GuardExceeded when
/// C(|pool|, k) > kExhaustiveGuard and Infeasible when no k-subset has all
/// edges.
TeamSearchResult best_team_exhaustive(const CountTable& table, std::span<const AgentId> pool, std::size_t k,
                                      const AnalysisConfig& cfg);

/// Beam search over incremental rosters, keeping the `beam_width` best
/// feasible partial teams per size.
TeamSearchResult best_team_greedy(const CountTable& table, std::span<const AgentId> pool, std::size_t k,
                                  const AnalysisConfig& cfg, std::size_t beam_width);

struct DraftState {
    std::vector<AgentId> picked;
    std::vector<AgentId> pool;
    std::vector<AgentId> banned;
    std::size_t team_size = 5;

    void validate() const;
};

struct Recommendation {
    AgentId candidate;
    std::optional<double> projected_index;  // nullopt when no edge qualifies
    std::optional<std::pair<OrderedEdge, double>> weakest_edge;
    double data_coverage = 0.0;
    bool below_target = false;  // some candidate-picked pair is a below-target Harmony pair
};

struct DraftRecommendations {
    std::vector<Recommendation> ranked;
    bool no_data_warning = false;  // every candidate has coverage 0
};

DraftRecommendations recommend_next(const CountTable& table, const DraftState& state, const AnalysisConfig& cfg);

} // namespace harmony
