#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>

#include "harmony/assessment.hpp"

namespace harmony {

struct Quartiles {
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
};

struct ExtremePair {
    AgentPair pair;
    double index;
};

struct DistributionReport {
    std::uint64_t total = 0;
    std::array<std::uint64_t, 4> class_counts{};  // indexed by HarmonyClass
    std::uint64_t below_target_harmony = 0;
    double bin_width = 0.01;
    std::map<std::int64_t, std::uint64_t> histogram;  // bin k covers [k*w, (k+1)*w)
    std::optional<Quartiles> index_quartiles;
    std::optional<Quartiles> deviation_quartiles;  // index - 1
    std::optional<double> mean_index;
    std::optional<ExtremePair> min_pair;
    std::optional<ExtremePair> max_pair;

    std::uint64_t count(HarmonyClass c) const { return class_counts[static_cast<std::size_t>(c)]; }
};

/// Linear-interpolation quantile (type 7) of an ascending sample.
double quantile_sorted(std::span<const double> sorted, double q);

DistributionReport distribution_report(std::span<const PairAssessment> assessments, double bin_width = 0.01);

/// Human-readable table.
std::string format_report_text(const DistributionReport& report, const FilterSummary* summary = nullptr);

} // namespace harmony
