#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "harmony/assessment.hpp"

namespace harmony {

enum class GraphFormat { GraphJson, Dot };

std::optional<GraphFormat> parse_graph_format(std::string_view name);

/// Nodes are agents with at least one assessed edge, annotated with solo
/// rate and games (taken from the assessments' probabilities); edges are the assessments. Sorted by id and (a, b);
/// numbers printed with 6 decimals.
std::string export_graph(std::span<const PairAssessment> assessments, GraphFormat format);

/// Formats with exactly 6 decimal places ("1.414214").
std::string fixed6(double value);

} // namespace harmony
