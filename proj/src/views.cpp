#include "harmony/views.hpp"

#include <set>

#include "harmony/errors.hpp"
#include "harmony/rates.hpp"

namespace harmony::views {

using nlohmann::json;

namespace {

json edge_json(const OrderedEdge& e, double ratio) { return {{"from", e.from.str()}, {"to", e.to.str()}, {"ratio", ratio}}; }

json ids_json(std::span<const AgentId> ids) {
    json out = json::array();
    for (const auto& a : ids) out.push_back(a.str());
    return out;
}

json quartiles_json(const Quartiles& q) {
    return {{"min", q.min}, {"q1", q.q1}, {"median", q.median}, {"q3", q.q3}, {"max", q.max}};
}

json extreme_json(const std::optional<ExtremePair>& e) {
    if (!e) return nullptr;
    return {{"a", e->pair.first().str()}, {"b", e->pair.second().str()}, {"index", e->index}};
}

std::vector<AgentId> string_list(const json& body, const char* key) {
    std::vector<AgentId> out;
    auto it = body.find(key);
    if (it == body.end() || it->is_null()) return out;
    if (!it->is_array()) {
        throw Error(ErrorCode::InvalidArgument, std::string("\"") + key + "\" must be an array of agent ids");
    }
    for (const auto& v : *it) {
        if (!v.is_string() || !AgentId::validate(v.get<std::string>()).empty()) {
            throw Error(ErrorCode::InvalidArgument, std::string("\"") + key + "\" must be an array of agent ids");
        }
        out.emplace_back(v.get<std::string>());
    }
    return out;
}

void require_known(const CountTable& table, std::span<const AgentId> ids) {
    for (const auto& a : ids) {
        if (!table.has_agent(a)) {
            throw Error(ErrorCode::NotFound, "unknown agent " + a.str(), {{"agent", a.str()}});
        }
    }
}

} // namespace

json probabilities(const PairProbabilities& p) {
    return {{"x", p.x.str()},
            {"y", p.y.str()},
            {"p_x", p.p_x},
            {"p_y", p.p_y},
            {"p_joint", p.p_joint},
            {"p_x_not_y", p.p_x_not_y},
            {"p_y_not_x", p.p_y_not_x},
            {"n_x", p.n_x},
            {"n_y", p.n_y},
            {"n_joint", p.n_joint},
            {"n_x_not_y", p.n_x_not_y},
            {"n_y_not_x", p.n_y_not_x}};
}

json assessment(const PairAssessment& a) {
    return {{"a", a.pair.first().str()},
            {"b", a.pair.second().str()},
            {"index", a.index},
            {"ratio_a", a.ratio_x},
            {"ratio_b", a.ratio_y},
            {"class", std::string(to_string(a.cls))},
            {"below_target", a.below_target},
            {"probabilities", probabilities(a.probabilities)}};
}

json team(const TeamAssessment& t) {
    json edges = json::array();
    for (const auto& [e, r] : t.edge_ratios) edges.push_back(edge_json(e, r));
    json excluded = json::array();
    for (const auto& ex : t.excluded_edges) {
        excluded.push_back({{"from", ex.edge.from.str()},
                            {"to", ex.edge.to.str()},
                            {"status", std::string(to_string(ex.status))},
                            {"reason", ex.reason}});
    }
    const auto weakest = t.weakest_edge();
    return {{"team", ids_json(t.team)},
            {"index", t.index},
            {"partial", t.partial},
            {"coverage", t.coverage},
            {"edges", edges},
            {"excluded_edges", excluded},
            {"weakest_edge", weakest ? edge_json(weakest->first, weakest->second) : json(nullptr)}};
}

json recommendations(const DraftRecommendations& r) {
    json list = json::array();
    for (const auto& rec : r.ranked) {
        list.push_back({{"candidate", rec.candidate.str()},
                        {"projected_index", rec.projected_index ? json(*rec.projected_index) : json(nullptr)},
                        {"data_coverage", rec.data_coverage},
                        {"below_target", rec.below_target},
                        {"weakest_edge", rec.weakest_edge ? edge_json(rec.weakest_edge->first, rec.weakest_edge->second)
                                                          : json(nullptr)}});
    }
    return {{"no_data_warning", r.no_data_warning}, {"recommendations", list}};
}

json search_result(const TeamSearchResult& r) {
    return {{"team", ids_json(r.team)},
            {"assessment", team(r.assessment)},
            {"evaluated", r.evaluated},
            {"unusable_agents", ids_json(r.unusable_agents)}};
}

json report(const DistributionReport& r, const FilterSummary& s) {
    json classes = json::object();
    for (auto c : {HarmonyClass::Harmony, HarmonyClass::Uplift, HarmonyClass::Depress, HarmonyClass::Discord}) {
        classes[std::string(to_string(c))] = r.count(c);
    }
    json hist = json::array();
    for (const auto& [bin, n] : r.histogram) {
        hist.push_back({{"bin", bin}, {"start", static_cast<double>(bin) * r.bin_width}, {"count", n}});
    }
    return {{"total", r.total},
            {"classes", classes},
            {"below_target_harmony", r.below_target_harmony},
            {"summary",
             {{"assessed", s.assessed},
              {"filtered_by_threshold", s.filtered_by_threshold},
              {"filtered_undefined", s.filtered_undefined},
              {"never_paired", s.never_paired}}},
            {"bin_width", r.bin_width},
            {"histogram", hist},
            {"quartiles", r.index_quartiles ? json{{"index", quartiles_json(*r.index_quartiles)},
                                                   {"deviation", quartiles_json(*r.deviation_quartiles)}}
                                            : json(nullptr)},
            {"mean_index", r.mean_index ? json(*r.mean_index) : json(nullptr)},
            {"min_pair", extreme_json(r.min_pair)},
            {"max_pair", extreme_json(r.max_pair)}};
}

json agents(const CountTable& table, double alpha) {
    json list = json::array();
    for (const auto& [id, t] : table.agents()) {
        list.push_back({{"id", id.str()},
                        {"solo_rate", t.games ? json(smoothed_rate(t.wins, t.games, alpha)) : json(nullptr)},
                        {"games", t.games},
                        {"wins", t.wins}});
    }
    return {{"agents", list}};
}

std::vector<AgentId> resolve_agents(const CountTable& table, std::span<const std::string> ids) {
    std::vector<AgentId> out;
    for (const auto& s : ids) {
        if (!AgentId::validate(s).empty()) {
            throw Error(ErrorCode::NotFound, "unknown agent \"" + s + "\"", {{"agent", s}});
        }
        out.emplace_back(s);
    }
    require_known(table, out);
    return out;
}

json pair(const CountTable& table, const std::string& a, const std::string& b, const AnalysisConfig& cfg) {
    const std::string ids[2] = {a, b};
    const auto resolved = resolve_agents(table, ids);
    if (resolved[0] == resolved[1]) {
        throw Error(ErrorCode::InvalidArgument, "pair needs two distinct agents", {{"agent", a}});
    }
    const auto& lo = std::min(resolved[0], resolved[1]);
    const auto& hi = std::max(resolved[0], resolved[1]);
    const auto p = pair_rates(table, lo, hi, cfg.smoothing_alpha);
    if (p.n_joint < cfg.min_shared_games) {
        const double index = harmony_index_pair(p);
        return {{"a", lo.str()},
                {"b", hi.str()},
                {"status", "below_threshold"},
                {"min_shared_games", cfg.min_shared_games},
                {"index", index},
                {"ratio_a", p.p_joint / p.p_x_not_y},
                {"ratio_b", p.p_joint / p.p_y_not_x},
                {"class", nullptr},
                {"below_target", false},
                {"probabilities", probabilities(p)}};
    }
    json out = assessment(classify_pair(p, cfg));
    out["status"] = "ok";
    out["min_shared_games"] = cfg.min_shared_games;
    return out;
}

json pairs(const CountTable& table, const AnalysisConfig& cfg) {
    const auto all = assess_all_pairs(table, cfg);
    json list = json::array();
    for (const auto& a : all.assessments) list.push_back(assessment(a));
    return {{"summary",
             {{"assessed", all.summary.assessed},
              {"filtered_by_threshold", all.summary.filtered_by_threshold},
              {"filtered_undefined", all.summary.filtered_undefined},
              {"never_paired", all.summary.never_paired}}},
            {"min_shared_games", cfg.min_shared_games},
            {"pairs", list}};
}

json team_query(const CountTable& table, std::span<const std::string> members, const AnalysisConfig& cfg, bool partial) {
    if (members.size() < 2) {
        throw Error(ErrorCode::InvalidArgument, "team size must be >= 2", {{"size", members.size()}});
    }
    const auto ids = resolve_agents(table, members);
    return team(harmony_index_team(table, ids, cfg, partial));
}

DraftState parse_draft_state(const json& body, const CountTable& table) {
    if (!body.is_object()) {
        throw Error(ErrorCode::InvalidArgument, "draft body must be a JSON object");
    }
    DraftState s;
    s.picked = string_list(body, "picked");
    s.banned = string_list(body, "banned");
    if (auto it = body.find("team_size"); it != body.end()) {
        if (!it->is_number_unsigned()) {
            throw Error(ErrorCode::InvalidArgument, "\"team_size\" must be a positive integer");
        }
        s.team_size = it->get<std::size_t>();
    }
    if (body.contains("pool") && !body["pool"].is_null()) {
        s.pool = string_list(body, "pool");
    } else {
        std::set<AgentId> taken(s.picked.begin(), s.picked.end());
        taken.insert(s.banned.begin(), s.banned.end());
        for (const auto& [id, t] : table.agents()) {
            if (!taken.contains(id)) s.pool.push_back(id);
        }
    }
    return s;
}

json draft_query(const CountTable& table, const DraftState& state, const AnalysisConfig& cfg) {
    require_known(table, state.picked);
    require_known(table, state.pool);
    return recommendations(recommend_next(table, state, cfg));
}

} // namespace harmony::views
