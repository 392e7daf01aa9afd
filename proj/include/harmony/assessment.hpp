#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "harmony/config.hpp"
#include "harmony/count_table.hpp"
#include "harmony/rates.hpp"

namespace harmony {

enum class HarmonyClass { Harmony, Uplift, Depress, Discord };

/// Lowercase name ("harmony", ...).
std::string_view to_string(HarmonyClass c) noexcept;
/// Single-letter label used by the dot export (H, U, D, X).
char class_initial(HarmonyClass c) noexcept;
std::optional<HarmonyClass> parse_harmony_class(std::string_view name);

/// Class from the two directed ratios. A ratio of exactly 1 is not an
/// increase; a mixed pair with index exactly 1 is Depress.
HarmonyClass classify_ratios(double ratio_x, double ratio_y, double index) noexcept;

struct PairAssessment {
    AgentPair pair;
    double index = 0.0;
    double ratio_x = 0.0;  // for pair.first()
    double ratio_y = 0.0;  // for pair.second()
    HarmonyClass cls = HarmonyClass::Discord;
    bool below_target = false;  // Harmony with p_joint <= target
    PairProbabilities probabilities;
};

/// Throws Error(BelowThreshold) when n_joint < cfg.min_shared_games and
/// InsufficientData on zero baselines. Probabilities are reordered so that
/// x is the lexicographically smaller agent.
PairAssessment classify_pair(const PairProbabilities& p, const AnalysisConfig& cfg);

struct FilterSummary {
    std::uint64_t assessed = 0;
    std::uint64_t filtered_by_threshold = 0;
    std::uint64_t filtered_undefined = 0;
    std::uint64_t never_paired = 0;
};

struct PairAssessments {
    std::vector<PairAssessment> assessments;  // lexicographic by pair
    FilterSummary summary;
};

PairAssessments assess_all_pairs(const CountTable& table, const AnalysisConfig& cfg);

} // namespace harmony
