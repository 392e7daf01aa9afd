#pragma once

#include <optional>
#include <span>
#include <string>

#include <json.hpp>

#include "harmony/assessment.hpp"
#include "harmony/composer.hpp"
#include "harmony/harmony_index.hpp"
#include "harmony/report.hpp"

// JSON projections shared by the CLI (--format json) and the HTTP service,
// so both surfaces serialize the same core results the same way.
namespace harmony::views {

nlohmann::json probabilities(const PairProbabilities& p);
nlohmann::json assessment(const PairAssessment& a);
nlohmann::json team(const TeamAssessment& t);
nlohmann::json recommendations(const DraftRecommendations& r);
nlohmann::json search_result(const TeamSearchResult& r);
nlohmann::json report(const DistributionReport& r, const FilterSummary& s);

/// {"agents": [{"id", "solo_rate", "games", "wins"}...]}
nlohmann::json agents(const CountTable& table, double alpha);

/// Pair lookup: probabilities, index and class. Below the min_shared
/// threshold the class is null and "status" is "below_threshold".
/// Throws NotFound for unknown agents and InsufficientData on zero
/// denominators.
nlohmann::json pair(const CountTable& table, const std::string& a, const std::string& b, const AnalysisConfig& cfg);

/// {"summary": {...}, "pairs": [...]}
nlohmann::json pairs(const CountTable& table, const AnalysisConfig& cfg);

nlohmann::json team_query(const CountTable& table, std::span<const std::string> members, const AnalysisConfig& cfg,
                          bool partial);

nlohmann::json draft_query(const CountTable& table, const DraftState& state, const AnalysisConfig& cfg);

/// Parses {"picked": [...], "pool": [...], "banned": [...], "team_size": n}.
/// A missing pool means every known agent not picked or banned.
DraftState parse_draft_state(const nlohmann::json& body, const CountTable& table);

/// Throws NotFound unless every id is in the table.
std::vector<AgentId> resolve_agents(const CountTable& table, std::span<const std::string> ids);

} // namespace harmony::views
