#include "harmony/report.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <fmt/format.h>

namespace harmony {

double quantile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) {
        return 0.0;
    }
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

namespace {

Quartiles quartiles_of(std::span<const double> sorted) {
    return {sorted.front(), quantile_sorted(sorted, 0.25), quantile_sorted(sorted, 0.5), quantile_sorted(sorted, 0.75),
            sorted.back()};
}

} // namespace

DistributionReport distribution_report(std::span<const PairAssessment> assessments, double bin_width) {
    DistributionReport r;
    r.bin_width = bin_width;
    r.total = assessments.size();
    if (assessments.empty()) {
        return r;
    }
    std::vector<double> values;
    values.reserve(assessments.size());
    double sum = 0.0;
    for (const auto& a : assessments) {
        ++r.class_counts[static_cast<std::size_t>(a.cls)];
        if (a.below_target) {
            ++r.below_target_harmony;
        }
        ++r.histogram[static_cast<std::int64_t>(std::floor(a.index / bin_width))];
        values.push_back(a.index);
        sum += a.index;
        // Extremes keep the first pair in lexicographic order on ties.
        if (!r.min_pair || a.index < r.min_pair->index) {
            r.min_pair = ExtremePair{a.pair, a.index};
        }
        if (!r.max_pair || a.index > r.max_pair->index) {
            r.max_pair = ExtremePair{a.pair, a.index};
        }
    }
    std::sort(values.begin(), values.end());
    r.index_quartiles = quartiles_of(values);
    for (double& v : values) {
        v -= 1.0;
    }
    r.deviation_quartiles = quartiles_of(values);
    r.mean_index = sum / static_cast<double>(values.size());
    return r;
}

std::string format_report_text(const DistributionReport& r, const FilterSummary* summary) {
    std::string out;
    auto line = [&]<typename... Args>(fmt::format_string<Args...> f, Args&&... args) {
        out += fmt::format(f, std::forward<Args>(args)...);
        out += '\n';
    };
    line("assessed pairs: {}", r.total);
    if (summary) {
        line("filtered (below min shared games): {}", summary->filtered_by_threshold);
        line("filtered (undefined baseline): {}", summary->filtered_undefined);
        line("never paired: {}", summary->never_paired);
    }
    line("");
    line("{:<10} {:>8}", "class", "pairs");
    for (auto c : {HarmonyClass::Harmony, HarmonyClass::Uplift, HarmonyClass::Depress, HarmonyClass::Discord}) {
        line("{:<10} {:>8}", to_string(c), r.count(c));
    }
    line("below-target harmony: {}", r.below_target_harmony);
    if (r.index_quartiles) {
        const auto& q = *r.index_quartiles;
        const auto& d = *r.deviation_quartiles;
        line("");
        line("{:<10} {:>10} {:>10}", "quantile", "index", "vs 1");
        line("{:<10} {:>10.6f} {:>+10.6f}", "min", q.min, d.min);
        line("{:<10} {:>10.6f} {:>+10.6f}", "q1", q.q1, d.q1);
        line("{:<10} {:>10.6f} {:>+10.6f}", "median", q.median, d.median);
        line("{:<10} {:>10.6f} {:>+10.6f}", "q3", q.q3, d.q3);
        line("{:<10} {:>10.6f} {:>+10.6f}", "max", q.max, d.max);
        line("mean index: {:.6f}", *r.mean_index);
        line("lowest pair: {} {} {:.6f}", r.min_pair->pair.first().str(), r.min_pair->pair.second().str(),
             r.min_pair->index);
        line("highest pair: {} {} {:.6f}", r.max_pair->pair.first().str(), r.max_pair->pair.second().str(),
             r.max_pair->index);
        line("");
        line("histogram (bin width {}):", r.bin_width);
        for (const auto& [bin, n] : r.histogram) {
            line("  [{:.4f}, {:.4f}) {}", static_cast<double>(bin) * r.bin_width,
                 static_cast<double>(bin + 1) * r.bin_width, n);
        }
    }
    return out;
}

} // namespace harmony
