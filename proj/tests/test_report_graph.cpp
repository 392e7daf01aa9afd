#include <doctest.h>

#include <regex>
#include <set>

#include "harmony/assessment.hpp"
#include "harmony/graph_export.hpp"
#include "harmony/report.hpp"
#include "harmony/synth.hpp"
#include "harmony/views.hpp"
#include "test_support.hpp"

using namespace harmony;

namespace {

PairAssessment make(const std::string& a, const std::string& b, double rx, double ry, double joint = 0.6) {
    PairProbabilities p{.x = AgentId(a), .y = AgentId(b)};
    p.p_joint = joint;
    p.p_x_not_y = joint / rx;
    p.p_y_not_x = joint / ry;
    p.p_x = 0.5;
    p.p_y = 0.5;
    p.n_x = 4000;
    p.n_y = 3000;
    p.n_joint = 1200;
    return classify_pair(p, AnalysisConfig{});
}

const PairAssessments& synth90() {
    static const PairAssessments all = [] {
        const auto cfg = synth::SynthConfig::from_json(
            nlohmann::json::parse(testing::read_file(testing::fixture_path("synth90.json"))));
        return assess_all_pairs(accumulate_counts(synth::generate_dataset(cfg)), AnalysisConfig{});
    }();
    return all;
}

} // namespace

TEST_CASE("quantile_sorted uses linear interpolation") {
    const std::vector<double> v{1, 2, 3, 4};
    CHECK(quantile_sorted(v, 0.0) == 1.0);
    CHECK(quantile_sorted(v, 0.25) == doctest::Approx(1.75));
    CHECK(quantile_sorted(v, 0.5) == doctest::Approx(2.5));
    CHECK(quantile_sorted(v, 1.0) == 4.0);
    const std::vector<double> one{7};
    CHECK(quantile_sorted(one, 0.3) == 7.0);
}

TEST_CASE("empty input gives an empty report") {
    const auto r = distribution_report({});
    CHECK(r.total == 0);
    CHECK(r.histogram.empty());
    CHECK_FALSE(r.index_quartiles);
    CHECK_FALSE(r.min_pair);
    const auto j = views::report(r, FilterSummary{});
    CHECK(j["quartiles"].is_null());
    CHECK(j["classes"]["harmony"] == 0);
    CHECK_FALSE(format_report_text(r).empty());
}

TEST_CASE("one pair per class") {
    const std::vector<PairAssessment> v{
        make("a", "b", 1.2, 1.1),          // harmony
        make("a", "c", 1.5, 0.9),          // uplift
        make("b", "c", 1.1, 0.8),          // depress
        make("c", "d", 0.9, 0.8),          // discord
        make("a", "d", 1.05, 1.02, 0.45),  // harmony below target
    };
    const auto r = distribution_report(v);
    CHECK(r.total == 5);
    CHECK(r.count(HarmonyClass::Harmony) == 2);
    CHECK(r.count(HarmonyClass::Uplift) == 1);
    CHECK(r.count(HarmonyClass::Depress) == 1);
    CHECK(r.count(HarmonyClass::Discord) == 1);
    CHECK(r.below_target_harmony == 1);
    CHECK(r.min_pair->pair == AgentPair(AgentId("c"), AgentId("d")));
    CHECK(r.max_pair->pair == AgentPair(AgentId("a"), AgentId("c")));
    std::uint64_t hist_total = 0;
    for (const auto& [bin, n] : r.histogram) hist_total += n;
    CHECK(hist_total == 5);
    CHECK(r.deviation_quartiles->median == doctest::Approx(r.index_quartiles->median - 1.0));
    // index sqrt(0.72) falls in bin 84 at width 0.01
    CHECK(r.histogram.count(84) == 1);
    const auto coarse = distribution_report(v, 0.5);
    CHECK(coarse.histogram.size() == 2);  // [0.5, 1) and [1, 1.5)
}

TEST_CASE("synth90 integer report fields are frozen") {
    const auto& all = synth90();
    const auto r = distribution_report(all.assessments);
    auto got = views::report(r, all.summary);
    nlohmann::json ints{{"total", got["total"]},
                        {"classes", got["classes"]},
                        {"below_target_harmony", got["below_target_harmony"]},
                        {"summary", got["summary"]},
                        {"histogram", nlohmann::json::array()}};
    for (const auto& h : got["histogram"]) ints["histogram"].push_back({{"bin", h["bin"]}, {"count", h["count"]}});
    const auto frozen = nlohmann::json::parse(testing::read_file(testing::fixture_path("synth90_report_frozen.json")));
    CHECK(ints == frozen);
    CHECK(r.total == 4005);
}

TEST_CASE("graph_json schema and ordering") {
    const std::vector<PairAssessment> v{make("a", "b", 2.0, 1.0), make("b", "c", 0.9, 0.8)};
    const auto text = export_graph(v, GraphFormat::GraphJson);
    const auto j = nlohmann::json::parse(text);
    REQUIRE(j["nodes"].size() == 3);
    CHECK(j["nodes"][0]["id"] == "a");
    CHECK(j["nodes"][2]["id"] == "c");
    CHECK(j["nodes"][0]["games"] == 4000);
    REQUIRE(j["edges"].size() == 2);
    CHECK(j["edges"][0]["a"] == "a");
    CHECK(j["edges"][0]["b"] == "b");
    CHECK(j["edges"][0]["class"] == "uplift");
    CHECK(j["edges"][0]["shared_games"] == 1200);
    CHECK(text.find("\"index\":1.414214") != std::string::npos);
    CHECK(text.find("\"solo_rate\":0.500000") != std::string::npos);
    // every floating number has six decimals
    const std::regex number(R"(:(-?\d+\.\d+))");
    for (auto it = std::sregex_iterator(text.begin(), text.end(), number); it != std::sregex_iterator(); ++it) {
        const auto s = (*it)[1].str();
        CHECK(s.size() - s.find('.') - 1 == 6);
    }
    CHECK(fixed6(1.0) == "1.000000");
    CHECK(fixed6(0.25) == "0.250000");
    CHECK(fixed6(-0.0000004) == "-0.000000");
}

TEST_CASE("dot export is a well-formed undirected graph") {
    const std::vector<PairAssessment> v{make("a", "b", 2.0, 1.0)};
    const auto text = export_graph(v, GraphFormat::Dot);
    CHECK(text.rfind("graph harmony {\n", 0) == 0);
    CHECK(text.substr(text.size() - 2) == "}\n");
    CHECK(text.find("->") == std::string::npos);
    const std::regex node_line(R"re(^  "[^"]+" \[solo_rate=\d+\.\d{6}, games=\d+\];$)re");
    const std::regex edge_line(R"re(^  "[^"]+" -- "[^"]+" \[weight=\d+\.\d{6}, label="[HUDX]"\];$)re");
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    int nodes = 0, edges = 0;
    while (std::getline(in, line) && line != "}") {
        if (std::regex_match(line, node_line)) {
            ++nodes;
        } else if (std::regex_match(line, edge_line)) {
            ++edges;
        } else {
            FAIL("unexpected dot line: " << line);
        }
    }
    CHECK(nodes == 2);
    CHECK(edges == 1);
    CHECK(text.find("label=\"U\"") != std::string::npos);
    CHECK(parse_graph_format("dot") == GraphFormat::Dot);
    CHECK_FALSE(parse_graph_format("svg"));
}

TEST_CASE("synth90 graph matches the assessment set") {
    const auto& all = synth90();
    const auto j = nlohmann::json::parse(export_graph(all.assessments, GraphFormat::GraphJson));
    std::set<std::string> with_edge;
    for (const auto& a : all.assessments) {
        with_edge.insert(a.pair.first().str());
        with_edge.insert(a.pair.second().str());
    }
    CHECK(j["nodes"].size() == with_edge.size());
    CHECK(j["edges"].size() == all.assessments.size());
    for (std::size_t i = 1; i < j["nodes"].size(); ++i) {
        CHECK(j["nodes"][i - 1]["id"].get<std::string>() < j["nodes"][i]["id"].get<std::string>());
    }
    const auto dot = export_graph(all.assessments, GraphFormat::Dot);
    CHECK(static_cast<std::size_t>(std::count(dot.begin(), dot.end(), '\n')) == 2 + with_edge.size() + all.assessments.size());
}
