#include "harmony/assessment.hpp"

#include <utility>

#include "harmony/errors.hpp"
#include "harmony/harmony_index.hpp"

namespace harmony {

std::string_view to_string(HarmonyClass c) noexcept {
    switch (c) {
    case HarmonyClass::Harmony: return "harmony";
    case HarmonyClass::Uplift: return "uplift";
    case HarmonyClass::Depress: return "depress";
    case HarmonyClass::Discord: return "discord";
    }
    return "unknown";
}

char class_initial(HarmonyClass c) noexcept {
    switch (c) {
    case HarmonyClass::Harmony: return 'H';
    case HarmonyClass::Uplift: return 'U';
    case HarmonyClass::Depress: return 'D';
    case HarmonyClass::Discord: return 'X';
    }
    return '?';
}

std::optional<HarmonyClass> parse_harmony_class(std::string_view name) {
    for (auto c : {HarmonyClass::Harmony, HarmonyClass::Uplift, HarmonyClass::Depress, HarmonyClass::Discord}) {
        if (name == to_string(c)) {
            return c;
        }
    }
    return std::nullopt;
}

HarmonyClass classify_ratios(double ratio_x, double ratio_y, double index) noexcept {
    const bool win_x = ratio_x > 1.0;
    const bool win_y = ratio_y > 1.0;
    if (win_x && win_y) return HarmonyClass::Harmony;
    if (!win_x && !win_y) return HarmonyClass::Discord;
    return index > 1.0 ? HarmonyClass::Uplift : HarmonyClass::Depress;
}

namespace {

PairProbabilities swapped(const PairProbabilities& p) {
    PairProbabilities s = p;
    std::swap(s.x, s.y);
    std::swap(s.p_x, s.p_y);
    std::swap(s.n_x, s.n_y);
    std::swap(s.p_x_not_y, s.p_y_not_x);
    std::swap(s.n_x_not_y, s.n_y_not_x);
    return s;
}

} // namespace

PairAssessment classify_pair(const PairProbabilities& p, const AnalysisConfig& cfg) {
    if (p.n_joint < cfg.min_shared_games) {
        throw Error(ErrorCode::BelowThreshold,
                    "pair " + p.x.str() + "/" + p.y.str() + " has " + std::to_string(p.n_joint) +
                        " shared games, below min_shared_games " + std::to_string(cfg.min_shared_games),
                    {{"x", p.x.str()},
                     {"y", p.y.str()},
                     {"shared_games", p.n_joint},
                     {"min_shared_games", cfg.min_shared_games}});
    }
    const PairProbabilities q = p.y < p.x ? swapped(p) : p;
    PairAssessment a{.pair = AgentPair(q.x, q.y), .probabilities = q};
    a.index = harmony_index_pair(q);
    a.ratio_x = q.p_joint / q.p_x_not_y;
    a.ratio_y = q.p_joint / q.p_y_not_x;
    a.cls = classify_ratios(a.ratio_x, a.ratio_y, a.index);
    a.below_target = a.cls == HarmonyClass::Harmony && q.p_joint <= cfg.target_success_rate;
    return a;
}

PairAssessments assess_all_pairs(const CountTable& table, const AnalysisConfig& cfg) {
    PairAssessments out;
    const std::uint64_t agents = table.agents().size();
    const std::uint64_t possible = agents < 2 ? 0 : agents * (agents - 1) / 2;
    std::uint64_t present = 0;
    for (const auto& [pair, tally] : table.pairs()) {
        if (tally.games == 0) {
            continue;
        }
        ++present;
        if (tally.games < cfg.min_shared_games) {
            ++out.summary.filtered_by_threshold;
            continue;
        }
        try {
            const auto p = pair_rates(table, pair.first(), pair.second(), cfg.smoothing_alpha);
            out.assessments.push_back(classify_pair(p, cfg));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::InsufficientData) {
                throw;
            }
            ++out.summary.filtered_undefined;
        }
    }
    out.summary.assessed = out.assessments.size();
    out.summary.never_paired = possible - present;
    return out;
}

} // namespace harmony
