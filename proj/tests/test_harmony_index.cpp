#include <doctest.h>

#include <cmath>
#include <random>

#include "harmony/errors.hpp"
#include "harmony/harmony_index.hpp"
#include "test_support.hpp"

using namespace harmony;

namespace {

PairProbabilities probs(double joint, double x_not_y, double y_not_x) {
    PairProbabilities p{.x = AgentId("x"), .y = AgentId("y")};
    p.p_joint = joint;
    p.p_x_not_y = x_not_y;
    p.p_y_not_x = y_not_x;
    return p;
}

// Three agents whose conditional rates are all exactly 0.5.
CountTable neutral_triple() {
    CountTable t;
    for (const char* id : {"a", "b", "c"}) t.add_agent(AgentId(id), {3000, 1500});
    t.add_pair(AgentPair(AgentId("a"), AgentId("b")), {1000, 500});
    t.add_pair(AgentPair(AgentId("a"), AgentId("c")), {1000, 500});
    t.add_pair(AgentPair(AgentId("b"), AgentId("c")), {1000, 500});
    t.validate();
    return t;
}

AnalysisConfig cfg_min(std::uint64_t min_shared) {
    AnalysisConfig c;
    c.min_shared_games = min_shared;
    return c;
}

} // namespace

TEST_CASE("pair index examples") {
    CHECK(harmony_index_pair(probs(0.5, 0.5, 0.5)) == 1.0);
    CHECK(harmony_index_pair(probs(0.6, 0.5, 0.48)) == doctest::Approx(1.224744871391589).epsilon(1e-12));
    CHECK(harmony_index_pair(probs(0.0, 0.4, 0.3)) == 0.0);
}

TEST_CASE("pair index rejects zero baselines") {
    try {
        (void)harmony_index_pair(probs(0.5, 0.0, 0.5));
        FAIL("expected error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InsufficientData);
        CHECK(e.detail()["baseline"] == "x_without_y");
    }
    CHECK_THROWS_AS(harmony_index_pair(probs(0.5, 0.5, 0.0)), Error);
}

TEST_CASE("pair index symmetry and monotonicity") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (int i = 0; i < 2000; ++i) {
        const double j = u(rng), bx = u(rng), by = u(rng);
        const double idx = harmony_index_pair(probs(j, bx, by));
        CHECK(idx == doctest::Approx(harmony_index_pair(probs(j, by, bx))).epsilon(1e-15));
        const double bump = 0.01;
        CHECK(harmony_index_pair(probs(j + bump, bx, by)) > idx);
        CHECK(harmony_index_pair(probs(j, bx + bump, by)) < idx);
        CHECK(harmony_index_pair(probs(j, bx, by + bump)) < idx);
    }
}

TEST_CASE("team index from ratios") {
    const std::vector<double> neutral(6, 1.0);
    CHECK(team_index_from_ratios(neutral, 3) == 1.0);
    const std::vector<double> mixed{1.2, 1.2, 1.1, 1.1, 0.9, 0.9};
    // (1.2^2 * 1.1^2 * 0.9^2)^(1/3), evaluated independently
    CHECK(team_index_from_ratios(mixed, 3) == doctest::Approx(1.1217023431865554).epsilon(1e-12));
}

TEST_CASE("team of two reproduces the pair index") {
    const auto t = accumulate_counts(testing::fixture_a_records());
    const std::vector<AgentId> team{AgentId("b"), AgentId("a")};
    const auto a = harmony_index_team(t, team, cfg_min(1));
    const auto p = pair_rates(t, AgentId("a"), AgentId("b"));
    CHECK(a.index == harmony_index_pair(p));
    CHECK(a.index == std::sqrt(2.0));
    CHECK(a.team == std::vector<AgentId>{AgentId("a"), AgentId("b")});
    CHECK(a.edge_ratios.size() == 2);
    CHECK(a.edge_ratios.at({AgentId("a"), AgentId("b")}) == 2.0);
    CHECK(a.edge_ratios.at({AgentId("b"), AgentId("a")}) == 1.0);
    CHECK(a.coverage == 1.0);
    CHECK_FALSE(a.partial);
    const auto weakest = a.weakest_edge();
    REQUIRE(weakest);
    CHECK(weakest->first == OrderedEdge{AgentId("b"), AgentId("a")});
}

TEST_CASE("neutral triple has index 1 with n(n-1) edges") {
    const auto t = neutral_triple();
    const std::vector<AgentId> team{AgentId("a"), AgentId("b"), AgentId("c")};
    const auto a = harmony_index_team(t, team, cfg_min(1000));
    CHECK(a.index == 1.0);
    CHECK(a.edge_ratios.size() == 6);
}

TEST_CASE("excluded edges fail strict mode and are reported in partial mode") {
    const auto t = accumulate_counts(testing::fixture_a_records());
    const std::vector<AgentId> team{AgentId("a"), AgentId("b"), AgentId("e")};
    try {
        (void)harmony_index_team(t, team, cfg_min(1));
        FAIL("expected insufficient data");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InsufficientData);
        CHECK(e.detail()["excluded_edges"].size() == 2);  // a-e never co-rostered
    }
    const auto a = harmony_index_team(t, team, cfg_min(1), true);
    CHECK(a.partial);
    CHECK(a.excluded_edges.size() == 2);
    CHECK(a.edge_ratios.size() == 4);
    CHECK(a.coverage == doctest::Approx(4.0 / 6.0));
    double product = 1.0;
    for (const auto& [e, r] : a.edge_ratios) product *= r;
    CHECK(a.index == doctest::Approx(std::cbrt(product)));
}

TEST_CASE("threshold filters team edges") {
    const auto t = accumulate_counts(testing::fixture_a_records());
    const std::vector<AgentId> team{AgentId("a"), AgentId("b")};
    CHECK_THROWS_AS(harmony_index_team(t, team, cfg_min(4)), Error);
    CHECK_THROWS_AS(harmony_index_team(t, team, cfg_min(4), true), Error);  // nothing survives
}

TEST_CASE("team argument validation") {
    const auto t = neutral_triple();
    const std::vector<AgentId> one{AgentId("a")};
    const std::vector<AgentId> dup{AgentId("a"), AgentId("a")};
    CHECK_THROWS_AS(harmony_index_team(t, one, cfg_min(1)), Error);
    CHECK_THROWS_AS(harmony_index_team(t, dup, cfg_min(1)), Error);
}

TEST_CASE("edge evaluation statuses") {
    const auto t = accumulate_counts(testing::fixture_a_records());
    CHECK(evaluate_pair_edges(t, AgentId("a"), AgentId("b"), cfg_min(1)).status == EdgeStatus::Ok);
    CHECK(evaluate_pair_edges(t, AgentId("a"), AgentId("b"), cfg_min(4)).status == EdgeStatus::BelowThreshold);
    // d without b never wins: zero baseline
    CHECK(evaluate_pair_edges(t, AgentId("b"), AgentId("d"), cfg_min(1)).status == EdgeStatus::UndefinedBaseline);
    CHECK(evaluate_pair_edges(t, AgentId("a"), AgentId("e"), cfg_min(1)).status == EdgeStatus::BelowThreshold);
}
