#include <doctest.h>

#include <random>

#include "harmony/assessment.hpp"
#include "harmony/errors.hpp"
#include "harmony/harmony_index.hpp"
#include "harmony/synth.hpp"
#include "test_support.hpp"

using namespace harmony;

namespace {

PairProbabilities probs(double joint, double x_not_y, double y_not_x, std::uint64_t shared = 5000) {
    PairProbabilities p{.x = AgentId("x"), .y = AgentId("y")};
    p.p_joint = joint;
    p.p_x_not_y = x_not_y;
    p.p_y_not_x = y_not_x;
    p.n_joint = shared;
    return p;
}

PairAssessment assess_published(const testing::PublishedPair& pp) {
    const auto t = testing::published_table(pp);
    return classify_pair(pair_rates(t, AgentId(pp.x), AgentId(pp.y)), AnalysisConfig{});
}

} // namespace

TEST_CASE("class rules and ties") {
    CHECK(classify_ratios(1.1, 1.2, std::sqrt(1.32)) == HarmonyClass::Harmony);
    CHECK(classify_ratios(0.9, 0.8, 0.85) == HarmonyClass::Discord);
    CHECK(classify_ratios(1.0, 1.0, 1.0) == HarmonyClass::Discord);  // equality is not an increase
    CHECK(classify_ratios(1.3, 0.9, std::sqrt(1.17)) == HarmonyClass::Uplift);
    CHECK(classify_ratios(1.1, 0.8, std::sqrt(0.88)) == HarmonyClass::Depress);
    CHECK(classify_ratios(2.0, 0.5, 1.0) == HarmonyClass::Depress);  // mixed at exactly 1
    CHECK(classify_ratios(2.0, 1.0, std::sqrt(2.0)) == HarmonyClass::Uplift);
}

TEST_CASE("classify_pair worked examples") {
    SUBCASE("both ratios above one") {
        const auto a = classify_pair(probs(0.66, 0.6, 0.55), AnalysisConfig{});
        CHECK(a.ratio_x == doctest::Approx(1.1));
        CHECK(a.ratio_y == doctest::Approx(1.2));
        CHECK(a.cls == HarmonyClass::Harmony);
        CHECK(a.index == doctest::Approx(1.1489125293076057));
        CHECK(a.index > 1.0);
        CHECK_FALSE(a.below_target);
    }
    SUBCASE("mixed pair at index exactly one") {
        const auto a = classify_pair(probs(0.5, 0.25, 1.0), AnalysisConfig{});
        CHECK(a.index == 1.0);
        CHECK(a.cls == HarmonyClass::Depress);
    }
    SUBCASE("joint exactly at target is below target") {
        const auto a = classify_pair(probs(0.5, 0.4, 0.45), AnalysisConfig{});
        CHECK(a.cls == HarmonyClass::Harmony);
        CHECK(a.below_target);
    }
    SUBCASE("orientation is normalized lexicographically") {
        auto p = probs(0.66, 0.6, 0.55);
        std::swap(p.x, p.y);  // x = "y", y = "x"
        const auto a = classify_pair(p, AnalysisConfig{});
        CHECK(a.pair.first().str() == "x");
        CHECK(a.probabilities.x.str() == "x");
        CHECK(a.ratio_x == doctest::Approx(1.2));  // baseline 0.55 now belongs to "x"
    }
}

TEST_CASE("below min_shared_games is a filter signal, not a data error") {
    try {
        (void)classify_pair(probs(0.6, 0.5, 0.5, 999), AnalysisConfig{});
        FAIL("expected filter");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BelowThreshold);
        CHECK(e.detail()["shared_games"] == 999);
    }
    CHECK_NOTHROW(classify_pair(probs(0.6, 0.5, 0.5, 1000), AnalysisConfig{}));
}

TEST_CASE("published pair figures") {
    const auto& pairs = testing::published_pairs();
    for (const auto& pp : pairs) {
        CAPTURE(pp.x);
        CAPTURE(pp.y);
        const auto t = testing::published_table(pp);
        const auto p = pair_rates(t, AgentId(pp.x), AgentId(pp.y));
        CHECK(p.p_joint == doctest::Approx(pp.published_joint).epsilon(1e-12));
        CHECK(std::abs(p.p_x - pp.published_p_x) < 5e-5);
        CHECK(std::abs(p.p_y - pp.published_p_y) < 5e-5);
        CHECK(std::abs(assess_published(pp).index - pp.published_index) <= 0.005);
    }
    SUBCASE("53/71 discord") {
        const auto a = assess_published(pairs[0]);
        CHECK(a.cls == HarmonyClass::Discord);
        CHECK(a.probabilities.p_joint < a.probabilities.p_x);
        CHECK(a.probabilities.p_joint < a.probabilities.p_y);
    }
    SUBCASE("53/37 depress") { CHECK(assess_published(pairs[1]).cls == HarmonyClass::Depress); }
    SUBCASE("7/68 below-target harmony") {
        const auto a = assess_published(pairs[2]);
        CHECK(a.cls == HarmonyClass::Harmony);
        CHECK(a.below_target);
    }
    SUBCASE("40/66 harmony above both solo rates") {
        const auto a = assess_published(pairs[3]);
        CHECK(a.cls == HarmonyClass::Harmony);
        CHECK(a.probabilities.p_joint > a.probabilities.p_x);
        CHECK(a.probabilities.p_joint > a.probabilities.p_y);
        CHECK_FALSE(a.below_target);
    }
    SUBCASE("7/39 uplift") { CHECK(assess_published(pairs[4]).cls == HarmonyClass::Uplift); }
}

TEST_CASE("class coherence over random probability triples") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.01, 0.99);
    std::array<int, 4> seen{};
    for (int i = 0; i < 10000; ++i) {
        const auto a = classify_pair(probs(u(rng), u(rng), u(rng)), AnalysisConfig{});
        CHECK(a.index == doctest::Approx(std::sqrt(a.ratio_x * a.ratio_y)).epsilon(1e-14));
        if (a.ratio_x > 1 && a.ratio_y > 1) CHECK(a.index > 1.0);
        if (a.ratio_x < 1 && a.ratio_y < 1) CHECK(a.index < 1.0);
        if (a.cls == HarmonyClass::Uplift) CHECK(a.index > 1.0);
        if (a.cls == HarmonyClass::Depress) CHECK(a.index <= 1.0);
        if (a.cls == HarmonyClass::Harmony) CHECK(a.index > 1.0);
        CHECK(a.below_target == (a.cls == HarmonyClass::Harmony && a.probabilities.p_joint <= 0.5));
        ++seen[static_cast<std::size_t>(a.cls)];
    }
    for (int n : seen) CHECK(n > 0);
}

TEST_CASE("assess_all_pairs filters and orders deterministically") {
    const auto t = accumulate_counts(testing::fixture_a_records());
    AnalysisConfig cfg;
    cfg.min_shared_games = 2;
    const auto all = assess_all_pairs(t, cfg);
    // pairs with >= 2 shared games: ab(3) ac(2) bd(2); bd has a zero baseline
    REQUIRE(all.assessments.size() == 2);
    CHECK(all.assessments[0].pair == AgentPair(AgentId("a"), AgentId("b")));
    CHECK(all.assessments[1].pair == AgentPair(AgentId("a"), AgentId("c")));
    CHECK(all.summary.assessed == 2);
    CHECK(all.summary.filtered_by_threshold == 5);
    CHECK(all.summary.filtered_undefined == 1);
    CHECK(all.summary.never_paired == 2);

    const testing::PublishedPair& pp = testing::published_pairs()[0];
    auto single = testing::published_table(pp);
    single.add_agent(AgentId("zz"), {5000, 2500});
    single.add_pair(AgentPair(AgentId("53"), AgentId("zz")), {999, 500});
    const auto filtered = assess_all_pairs(single, AnalysisConfig{});
    CHECK(filtered.assessments.size() == 1);
    CHECK(filtered.summary.filtered_by_threshold == 1);
}

TEST_CASE("90 agents yield at most 4005 assessments") {
    synth::SynthConfig cfg;
    cfg.num_agents = 90;
    cfg.team_size = 5;
    cfg.num_matches = 60000;
    cfg.seed = 90;
    const auto t = accumulate_counts(synth::generate_dataset(cfg));
    AnalysisConfig a;
    a.min_shared_games = 1;
    const auto all = assess_all_pairs(t, a);
    CHECK(all.assessments.size() <= 4005);
    CHECK(all.assessments.size() + all.summary.filtered_undefined + all.summary.filtered_by_threshold +
              all.summary.never_paired == 4005);
    std::array<std::uint64_t, 4> counts{};
    for (const auto& x : all.assessments) ++counts[static_cast<std::size_t>(x.cls)];
    CHECK(counts[0] + counts[1] + counts[2] + counts[3] == all.assessments.size());
}

TEST_CASE("count scaling leaves indices and classes unchanged") {
    std::mt19937_64 rng(5);
    const auto cfg = testing::random_config(rng, 10, 3, 20000);
    const auto t = accumulate_counts(synth::generate_dataset(cfg));
    AnalysisConfig a;
    a.min_shared_games = 100;
    const auto base = assess_all_pairs(t, a);
    AnalysisConfig a3 = a;
    a3.min_shared_games = 300;  // threshold scales with the counts
    const auto big = assess_all_pairs(testing::scaled(t, 3), a3);
    REQUIRE(base.assessments.size() == big.assessments.size());
    for (std::size_t i = 0; i < base.assessments.size(); ++i) {
        CHECK(base.assessments[i].index == big.assessments[i].index);
        CHECK(base.assessments[i].cls == big.assessments[i].cls);
        CHECK(base.assessments[i].below_target == big.assessments[i].below_target);
    }
}

TEST_CASE("class partition is invariant under agent relabeling") {
    std::mt19937_64 rng(8);
    const auto cfg = testing::random_config(rng, 8, 3, 20000);
    const auto recs = synth::generate_dataset(cfg);
    std::map<AgentId, AgentId> mapping;
    const auto ids = cfg.agent_ids();
    for (std::size_t i = 0; i < ids.size(); ++i) {
        mapping.emplace(ids[i], AgentId("agent-" + std::string(1, static_cast<char>('z' - i))));
    }
    AnalysisConfig a;
    a.min_shared_games = 100;
    const auto base = assess_all_pairs(accumulate_counts(recs), a);
    const auto moved = assess_all_pairs(accumulate_counts(testing::relabel(recs, mapping)), a);
    REQUIRE(base.assessments.size() == moved.assessments.size());
    std::map<AgentPair, HarmonyClass> moved_classes;
    for (const auto& m : moved.assessments) moved_classes.emplace(m.pair, m.cls);
    for (const auto& b : base.assessments) {
        const AgentPair target(mapping.at(b.pair.first()), mapping.at(b.pair.second()));
        CHECK(moved_classes.at(target) == b.cls);
    }
}

TEST_CASE("null-synergy synthetic run centers on the neutral index") {
    synth::SynthConfig cfg;
    cfg.num_agents = 12;
    cfg.team_size = 3;
    cfg.num_matches = 200000;
    cfg.seed = 4;
    const auto all = assess_all_pairs(accumulate_counts(synth::generate_dataset(cfg)), AnalysisConfig{});
    REQUIRE(all.assessments.size() == 66);
    double sum = 0.0;
    std::array<int, 4> counts{};
    for (const auto& a : all.assessments) {
        sum += a.index;
        ++counts[static_cast<std::size_t>(a.cls)];
    }
    CHECK(sum / 66.0 == doctest::Approx(1.0).epsilon(0.02));
    const int harmony = counts[0], uplift = counts[1], depress = counts[2], discord = counts[3];
    CHECK(harmony > uplift);
    CHECK(harmony > depress);
    CHECK(discord > uplift);
    CHECK(discord > depress);
    CHECK(std::abs(harmony - discord) < 20);
}
