#include "harmony/harmony_index.hpp"

#include <algorithm>
#include <cmath>

#include "harmony/errors.hpp"

namespace harmony {

double harmony_index_pair(const PairProbabilities& p) {
    auto undefined = [&](const char* which) {
        return Error(ErrorCode::InsufficientData,
                     std::string("undefined index: zero baseline ") + which + " for " + p.x.str() + "/" + p.y.str(),
                     {{"baseline", which}, {"x", p.x.str()}, {"y", p.y.str()}});
    };
    if (!(p.p_x_not_y > 0.0)) {
        throw undefined("x_without_y");
    }
    if (!(p.p_y_not_x > 0.0)) {
        throw undefined("y_without_x");
    }
    const double ratio_x = p.p_joint / p.p_x_not_y;
    const double ratio_y = p.p_joint / p.p_y_not_x;
    return std::sqrt(ratio_x * ratio_y);
}

std::string_view to_string(EdgeStatus status) noexcept {
    switch (status) {
    case EdgeStatus::Ok: return "ok";
    case EdgeStatus::BelowThreshold: return "below_threshold";
    case EdgeStatus::UndefinedBaseline: return "undefined_baseline";
    }
    return "unknown";
}

PairEdges evaluate_pair_edges(const CountTable& table, const AgentId& x, const AgentId& y,
                              const AnalysisConfig& cfg) {
    PairEdges out;
    out.shared_games = table.pair(x, y).games;
    if (out.shared_games < cfg.min_shared_games) {
        out.status = EdgeStatus::BelowThreshold;
        out.reason = "shared games " + std::to_string(out.shared_games) + " < " + std::to_string(cfg.min_shared_games);
        return out;
    }
    try {
        const auto p = pair_rates(table, x, y, cfg.smoothing_alpha);
        if (!(p.p_x_not_y > 0.0) || !(p.p_y_not_x > 0.0)) {
            out.status = EdgeStatus::UndefinedBaseline;
            out.reason = "zero baseline win rate";
            return out;
        }
        out.ratio_x = p.p_joint / p.p_x_not_y;
        out.ratio_y = p.p_joint / p.p_y_not_x;
    } catch (const Error& e) {
        out.status = EdgeStatus::UndefinedBaseline;
        out.reason = e.what();
    }
    return out;
}

std::optional<std::pair<OrderedEdge, double>> TeamAssessment::weakest_edge() const {
    std::optional<std::pair<OrderedEdge, double>> best;
    for (const auto& [edge, ratio] : edge_ratios) {
        if (!best || ratio < best->second) {
            best.emplace(edge, ratio);
        }
    }
    return best;
}

double team_index_from_ratios(std::span<const double> ratios, std::size_t team_size) {
    double product = 1.0;
    for (double r : ratios) {
        product *= r;
    }
    if (team_size == 2) {
        return std::sqrt(product);
    }
    return std::pow(product, 1.0 / static_cast<double>(team_size));
}

TeamAssessment harmony_index_team(const CountTable& table, std::span<const AgentId> team, const AnalysisConfig& cfg,
                                  bool partial) {
    TeamAssessment out;
    out.team.assign(team.begin(), team.end());
    std::sort(out.team.begin(), out.team.end());
    if (std::adjacent_find(out.team.begin(), out.team.end()) != out.team.end()) {
        throw Error(ErrorCode::InvalidArgument, "duplicate team member");
    }
    const std::size_t n = out.team.size();
    if (n < 2) {
        throw Error(ErrorCode::InvalidArgument, "team size must be >= 2", {{"size", n}});
    }

    std::vector<double> ratios;
    ratios.reserve(n * (n - 1));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto& x = out.team[i];
            const auto& y = out.team[j];
            const PairEdges e = evaluate_pair_edges(table, x, y, cfg);
            if (e.status != EdgeStatus::Ok) {
                out.excluded_edges.push_back({{x, y}, e.status, e.reason});
                out.excluded_edges.push_back({{y, x}, e.status, e.reason});
                continue;
            }
            out.edge_ratios.emplace(OrderedEdge{x, y}, e.ratio_x);
            out.edge_ratios.emplace(OrderedEdge{y, x}, e.ratio_y);
            ratios.push_back(e.ratio_x);
            ratios.push_back(e.ratio_y);
        }
    }
    std::sort(out.excluded_edges.begin(), out.excluded_edges.end(),
              [](const ExcludedEdge& a, const ExcludedEdge& b) { return a.edge < b.edge; });
    out.coverage = static_cast<double>(ratios.size()) / static_cast<double>(n * (n - 1));

    if (!out.excluded_edges.empty()) {
        nlohmann::json edges = nlohmann::json::array();
        for (const auto& ex : out.excluded_edges) {
            edges.push_back({{"from", ex.edge.from.str()},
                             {"to", ex.edge.to.str()},
                             {"status", std::string(to_string(ex.status))},
                             {"reason", ex.reason}});
        }
        if (!partial) {
            throw Error(ErrorCode::InsufficientData,
                        "insufficient data for " + std::to_string(out.excluded_edges.size()) + " team edges",
                        {{"excluded_edges", edges}});
        }
        if (ratios.empty()) {
            throw Error(ErrorCode::InsufficientData, "no team edge has sufficient data", {{"excluded_edges", edges}});
        }
        out.partial = true;
    }
    out.index = team_index_from_ratios(ratios, n);
    return out;
}

} // namespace harmony
