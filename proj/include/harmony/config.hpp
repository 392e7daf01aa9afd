#pragma once

#include <cstdint>

namespace harmony {

struct AnalysisConfig {
    std::uint64_t min_shared_games = 1000;
    double target_success_rate = 0.5;
    double smoothing_alpha = 0.0;

    /// Throws Error(InvalidArgument) on min_shared_games < 1,
    /// target outside (0, 1), or negative alpha.
    void validate() const;
};

} // namespace harmony
