#include "harmony/config.hpp"

#include "harmony/errors.hpp"

namespace harmony {

void AnalysisConfig::validate() const {
    if (min_shared_games < 1) {
        throw Error(ErrorCode::InvalidArgument, "min_shared_games must be >= 1");
    }
    if (!(target_success_rate > 0.0 && target_success_rate < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "target_success_rate must lie in (0, 1)",
                    {{"target_success_rate", target_success_rate}});
    }
    if (!(smoothing_alpha >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "smoothing_alpha must be >= 0", {{"smoothing_alpha", smoothing_alpha}});
    }
}

} // namespace harmony
