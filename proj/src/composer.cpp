#include "harmony/composer.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "harmony/assessment.hpp"
#include "harmony/errors.hpp"

namespace harmony {

namespace {

std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    long double r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r = r * static_cast<long double>(n - k + i) / static_cast<long double>(i);
        if (r > static_cast<long double>(cap) * 4) {
            return cap + 1;
        }
    }
    return static_cast<std::uint64_t>(std::llround(r));
}

std::vector<AgentId> sorted_unique(std::span<const AgentId> ids) {
    std::vector<AgentId> out(ids.begin(), ids.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Directed edge ratios between every pair of pool members.
class EdgeMatrix {
public:
    EdgeMatrix(const CountTable& table, const std::vector<AgentId>& pool, const AnalysisConfig& cfg)
        : n_(pool.size()), ok_(n_ * n_, false), ratio_(n_ * n_, 0.0) {
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = i + 1; j < n_; ++j) {
                const PairEdges e = evaluate_pair_edges(table, pool[i], pool[j], cfg);
                if (e.status == EdgeStatus::Ok) {
                    ok_[i * n_ + j] = ok_[j * n_ + i] = true;
                    ratio_[i * n_ + j] = e.ratio_x;
                    ratio_[j * n_ + i] = e.ratio_y;
                }
            }
        }
    }

    bool ok(std::size_t i, std::size_t j) const { return ok_[i * n_ + j]; }
    double ratio(std::size_t i, std::size_t j) const { return ratio_[i * n_ + j]; }

    /// Strict index of an ascending index set, nullopt if any edge is missing.
    /// Multiplies in the same order as harmony_index_team.
    std::optional<double> strict_index(std::span<const std::size_t> team) const {
        double product = 1.0;
        for (std::size_t a = 0; a < team.size(); ++a) {
            for (std::size_t b = a + 1; b < team.size(); ++b) {
                if (!ok(team[a], team[b])) {
                    return std::nullopt;
                }
                product *= ratio(team[a], team[b]);
                product *= ratio(team[b], team[a]);
            }
        }
        return team.size() == 2 ? std::sqrt(product) : std::pow(product, 1.0 / static_cast<double>(team.size()));
    }

    double coverage(std::span<const std::size_t> team) const {
        std::size_t good = 0, total = 0;
        for (std::size_t a = 0; a < team.size(); ++a) {
            for (std::size_t b = a + 1; b < team.size(); ++b) {
                ++total;
                good += ok(team[a], team[b]) ? 1 : 0;
            }
        }
        return total ? static_cast<double>(good) / static_cast<double>(total) : 0.0;
    }

    bool has_any_edge(std::size_t i) const {
        for (std::size_t j = 0; j < n_; ++j) {
            if (j != i && ok(i, j)) return true;
        }
        return false;
    }

private:
    std::size_t n_;
    std::vector<bool> ok_;
    std::vector<double> ratio_;
};

std::vector<AgentId> unusable(const EdgeMatrix& m, const std::vector<AgentId>& pool) {
    std::vector<AgentId> out;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (!m.has_any_edge(i)) out.push_back(pool[i]);
    }
    return out;
}

std::vector<AgentId> names_of(const std::vector<AgentId>& pool, std::span<const std::size_t> idx) {
    std::vector<AgentId> out;
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(pool[i]);
    return out;
}

void check_search_args(std::size_t pool_size, std::size_t k) {
    if (k < 2) {
        throw Error(ErrorCode::InvalidArgument, "team size k must be >= 2", {{"k", k}});
    }
    if (pool_size < k) {
        throw Error(ErrorCode::InvalidArgument, "pool smaller than k", {{"pool", pool_size}, {"k", k}});
    }
}

TeamSearchResult finish(const CountTable& table, const std::vector<AgentId>& team, const AnalysisConfig& cfg) {
    TeamSearchResult r;
    r.team = team;
    r.assessment = harmony_index_team(table, team, cfg);
    return r;
}

} // namespace

TeamSearchResult best_team_exhaustive(const CountTable& table, std::span<const AgentId> pool_in, std::size_t k,
                                      const AnalysisConfig& cfg) {
    const auto pool = sorted_unique(pool_in);
    check_search_args(pool.size(), k);
    const std::uint64_t subsets = binomial_capped(pool.size(), k, kExhaustiveGuard);
    if (subsets > kExhaustiveGuard) {
        throw Error(ErrorCode::GuardExceeded, "exhaustive search too large; use the greedy beam search",
                    {{"pool", pool.size()}, {"k", k}, {"guard", kExhaustiveGuard}});
    }
    const EdgeMatrix m(table, pool, cfg);

    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    std::optional<double> best;
    std::vector<std::size_t> best_idx;
    double best_coverage = 0.0;
    std::vector<std::size_t> best_coverage_idx = idx;
    std::uint64_t evaluated = 0;

    // Lexicographic k-combinations; a strictly better index replaces, so ties
    // keep the lexicographically smaller roster.
    while (true) {
        ++evaluated;
        if (auto v = m.strict_index(idx)) {
            if (!best || *v > *best) {
                best = v;
                best_idx = idx;
            }
        } else if (!best) {
            const double c = m.coverage(idx);
            if (c > best_coverage) {
                best_coverage = c;
                best_coverage_idx = idx;
            }
        }
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == pool.size() - k + (i - 1)) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }

    if (!best) {
        nlohmann::json roster = nlohmann::json::array();
        for (const auto& a : names_of(pool, best_coverage_idx)) roster.push_back(a.str());
        throw Error(ErrorCode::Infeasible, "no k-subset of the pool has sufficient data on every edge",
                    {{"best_partial_coverage", best_coverage}, {"best_partial_team", roster}});
    }
    auto r = finish(table, names_of(pool, best_idx), cfg);
    r.evaluated = evaluated;
    r.unusable_agents = unusable(m, pool);
    return r;
}

TeamSearchResult best_team_greedy(const CountTable& table, std::span<const AgentId> pool_in, std::size_t k,
                                  const AnalysisConfig& cfg, std::size_t beam_width) {
    const auto pool = sorted_unique(pool_in);
    check_search_args(pool.size(), k);
    if (beam_width < 1) {
        throw Error(ErrorCode::InvalidArgument, "beam_width must be >= 1");
    }
    const EdgeMatrix m(table, pool, cfg);

    struct State {
        std::vector<std::size_t> members;  // ascending
        double index;
    };
    auto better = [](const State& a, const State& b) {
        if (a.index != b.index) return a.index > b.index;
        return a.members < b.members;
    };
    auto prune = [&](std::vector<State>& states) {
        std::sort(states.begin(), states.end(), better);
        if (states.size() > beam_width) states.resize(beam_width);
    };

    std::uint64_t evaluated = 0;
    std::vector<State> beam;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        for (std::size_t j = i + 1; j < pool.size(); ++j) {
            const std::size_t team[2] = {i, j};
            ++evaluated;
            if (auto v = m.strict_index(team)) beam.push_back({{i, j}, *v});
        }
    }
    prune(beam);

    for (std::size_t size = 3; size <= k && !beam.empty(); ++size) {
        std::set<std::vector<std::size_t>> seen;
        std::vector<State> next;
        for (const auto& s : beam) {
            for (std::size_t c = 0; c < pool.size(); ++c) {
                if (std::binary_search(s.members.begin(), s.members.end(), c)) continue;
                auto members = s.members;
                members.insert(std::upper_bound(members.begin(), members.end(), c), c);
                if (!seen.insert(members).second) continue;
                ++evaluated;
                if (auto v = m.strict_index(members)) next.push_back({std::move(members), *v});
            }
        }
        prune(next);
        beam = std::move(next);
    }

    if (beam.empty()) {
        throw Error(ErrorCode::Infeasible, "beam search found no team with sufficient data on every edge",
                    {{"k", k}, {"beam_width", beam_width}});
    }
    auto r = finish(table, names_of(pool, beam.front().members), cfg);
    r.evaluated = evaluated;
    r.unusable_agents = unusable(m, pool);
    return r;
}

void DraftState::validate() const {
    std::set<AgentId> seen;
    for (const auto* group : {&picked, &pool, &banned}) {
        for (const auto& a : *group) {
            if (!seen.insert(a).second) {
                throw Error(ErrorCode::InvalidArgument, "agent " + a.str() + " appears twice across picked/pool/banned",
                            {{"agent", a.str()}});
            }
        }
    }
    if (picked.size() > team_size) {
        throw Error(ErrorCode::InvalidArgument, "more picks than team_size",
                    {{"picked", picked.size()}, {"team_size", team_size}});
    }
}

DraftRecommendations recommend_next(const CountTable& table, const DraftState& state, const AnalysisConfig& cfg) {
    state.validate();
    if (state.picked.empty()) {
        throw Error(ErrorCode::InvalidArgument, "draft needs at least one pick");
    }
    if (state.picked.size() >= state.team_size) {
        throw Error(ErrorCode::InvalidArgument, "team is already full", {{"team_size", state.team_size}});
    }
    if (state.pool.empty()) {
        throw Error(ErrorCode::InvalidArgument, "empty candidate pool");
    }

    DraftRecommendations out;
    const auto candidates = sorted_unique(state.pool);
    for (const auto& c : candidates) {
        std::vector<AgentId> roster = state.picked;
        roster.push_back(c);
        std::sort(roster.begin(), roster.end());
        const std::size_t n = roster.size();

        Recommendation rec{c, std::nullopt, std::nullopt, 0.0, false};
        std::vector<double> ratios;
        TeamAssessment partial;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const PairEdges e = evaluate_pair_edges(table, roster[i], roster[j], cfg);
                if (e.status != EdgeStatus::Ok) continue;
                ratios.push_back(e.ratio_x);
                ratios.push_back(e.ratio_y);
                partial.edge_ratios.emplace(OrderedEdge{roster[i], roster[j]}, e.ratio_x);
                partial.edge_ratios.emplace(OrderedEdge{roster[j], roster[i]}, e.ratio_y);
                if (roster[i] == c || roster[j] == c) {
                    const auto p = pair_rates(table, roster[i], roster[j], cfg.smoothing_alpha);
                    if (classify_pair(p, cfg).below_target) rec.below_target = true;
                }
            }
        }
        rec.data_coverage = static_cast<double>(ratios.size()) / static_cast<double>(n * (n - 1));
        if (!ratios.empty()) {
            rec.projected_index = team_index_from_ratios(ratios, n);
            rec.weakest_edge = partial.weakest_edge();
        }
        out.ranked.push_back(std::move(rec));
    }

    std::stable_sort(out.ranked.begin(), out.ranked.end(), [](const Recommendation& a, const Recommendation& b) {
        if (a.projected_index.has_value() != b.projected_index.has_value()) return a.projected_index.has_value();
        if (a.projected_index && *a.projected_index != *b.projected_index) return *a.projected_index > *b.projected_index;
        if (a.data_coverage != b.data_coverage) return a.data_coverage > b.data_coverage;
        return a.candidate < b.candidate;
    });
    out.no_data_warning = std::all_of(out.ranked.begin(), out.ranked.end(),
                                      [](const Recommendation& r) { return r.data_coverage == 0.0; });
    return out;
}

} // namespace harmony
