#include "harmony/graph_export.hpp"

#include <cstdio>
#include <map>

#include <json.hpp>

#include "harmony/errors.hpp"

namespace harmony {

std::optional<GraphFormat> parse_graph_format(std::string_view name) {
    if (name == "graph_json" || name == "json") return GraphFormat::GraphJson;
    if (name == "dot") return GraphFormat::Dot;
    return std::nullopt;
}

std::string fixed6(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", value);
    return buf;
}

namespace {

struct Node {
    double solo_rate;
    std::uint64_t games;
};

std::map<AgentId, Node> collect_nodes(std::span<const PairAssessment> assessments) {
    std::map<AgentId, Node> nodes;
    for (const auto& a : assessments) {
        const auto& p = a.probabilities;
        nodes.try_emplace(p.x, Node{p.p_x, p.n_x});
        nodes.try_emplace(p.y, Node{p.p_y, p.n_y});
    }
    return nodes;
}

std::string quoted(const std::string& s) { return nlohmann::json(s).dump(); }

std::string graph_json(std::span<const PairAssessment> assessments) {
    // Hand-written so every number carries exactly six decimals.
    std::string out = "{\"nodes\":[";
    bool first = true;
    for (const auto& [id, node] : collect_nodes(assessments)) {
        out += first ? "" : ",";
        first = false;
        out += "{\"id\":" + quoted(id.str()) + ",\"solo_rate\":" + fixed6(node.solo_rate) +
               ",\"games\":" + std::to_string(node.games) + "}";
    }
    out += "],\"edges\":[";
    first = true;
    for (const auto& a : assessments) {
        out += first ? "" : ",";
        first = false;
        out += "{\"a\":" + quoted(a.pair.first().str()) + ",\"b\":" + quoted(a.pair.second().str()) +
               ",\"index\":" + fixed6(a.index) + ",\"class\":\"" + std::string(to_string(a.cls)) +
               "\",\"shared_games\":" + std::to_string(a.probabilities.n_joint) + "}";
    }
    out += "]}\n";
    return out;
}

std::string dot(std::span<const PairAssessment> assessments) {
    std::string out = "graph harmony {\n";
    for (const auto& [id, node] : collect_nodes(assessments)) {
        out += "  " + quoted(id.str()) + " [solo_rate=" + fixed6(node.solo_rate) +
               ", games=" + std::to_string(node.games) + "];\n";
    }
    for (const auto& a : assessments) {
        out += "  " + quoted(a.pair.first().str()) + " -- " + quoted(a.pair.second().str()) +
               " [weight=" + fixed6(a.index) + ", label=\"" + class_initial(a.cls) + "\"];\n";
    }
    out += "}\n";
    return out;
}

} // namespace

std::string export_graph(std::span<const PairAssessment> assessments, GraphFormat format) {
    switch (format) {
    case GraphFormat::GraphJson: return graph_json(assessments);
    case GraphFormat::Dot: return dot(assessments);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown graph format");
}

} // namespace harmony
