#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "harmony/config.hpp"
#include "harmony/count_table.hpp"
#include "harmony/rates.hpp"

namespace harmony {

/// sqrt((p_joint / p_x_not_y) * (p_joint / p_y_not_x)).
/// Throws InsufficientData naming the zero baseline.
double harmony_index_pair(const PairProbabilities& p);

/// Why an edge could not be evaluated.
enum class EdgeStatus { Ok, BelowThreshold, UndefinedBaseline };

std::string_view to_string(EdgeStatus status) noexcept;

/// Both directed ratios of one unordered pair, or the reason they are missing.
struct PairEdges {
    EdgeStatus status = EdgeStatus::Ok;
    double ratio_x = 0.0;  // P(x∩y) / P(x∩ȳ)
    double ratio_y = 0.0;  // P(y∩x) / P(y∩x̄)
    std::uint64_t shared_games = 0;
    std::string reason;  // set when status != Ok
};

/// Evaluates one pair for use as a team edge: requires shared games >=
/// cfg.min_shared_games, positive denominators and positive baselines.
PairEdges evaluate_pair_edges(const CountTable& table, const AgentId& x, const AgentId& y,
                              const AnalysisConfig& cfg);

struct ExcludedEdge {
    OrderedEdge edge;
    EdgeStatus status;
    std::string reason;
};

/// Team assessment of a roster. In partial mode the product runs over
/// surviving edges only and the result is non-canonical.
struct TeamAssessment {
    std::vector<AgentId> team;  // sorted
    double index = 0.0;
    std::map<OrderedEdge, double> edge_ratios;
    std::vector<ExcludedEdge> excluded_edges;
    bool partial = false;
    double coverage = 1.0;  // surviving / n(n-1)

    std::optional<std::pair<OrderedEdge, double>> weakest_edge() const;
};

/// Aggregates directed edge ratios: (prod ratios)^(1/n), n = team size.
double team_index_from_ratios(std::span<const double> ratios, std::size_t team_size);

/// Strict mode throws InsufficientData listing every excluded edge; partial
/// mode reports them and only throws when no edge survives.
/// Duplicate members or |team| < 2 throw InvalidArgument.
TeamAssessment harmony_index_team(const CountTable& table, std::span<const AgentId> team,
                                  const AnalysisConfig& cfg, bool partial = false);

} // namespace harmony
