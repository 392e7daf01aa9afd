#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "harmony/agent_id.hpp"
#include "harmony/match.hpp"
#include "harmony/rates.hpp"

namespace harmony::synth {

/// Ground-truth model: side score = sum of member strengths + sum of
/// same-side pair synergies; P(side 1 wins) = logistic(score1 - score2).
struct SynthConfig {
    std::size_t num_agents = 10;
    std::size_t team_size = 5;
    std::uint64_t num_matches = 1000;
    std::map<AgentId, double> base_strengths;  // missing agents default to 0
    std::map<AgentPair, double> synergies;     // sparse, default 0
    std::uint64_t seed = 0;

    /// Throws Error(InvalidArgument).
    void validate() const;

    /// Agent ids "A00", "A01", ... zero-padded to a common width.
    std::vector<AgentId> agent_ids() const;

    static SynthConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

/// Matches are generated in fixed-size blocks; block b draws from
/// mt19937_64 seeded with splitmix64(seed + b * 0x9E3779B97F4A7C15).
inline constexpr std::uint64_t kBlockSize = 65536;

std::uint64_t splitmix64(std::uint64_t x) noexcept;
std::uint64_t block_seed(std::uint64_t seed, std::uint64_t block) noexcept;

/// Streams matches [begin, end) to `sink`; any range split yields the same
/// records as one pass.
void generate_range(const SynthConfig& cfg, std::uint64_t begin, std::uint64_t end,
                    const std::function<void(MatchRecord&&)>& sink);

std::vector<MatchRecord> generate_dataset(const SynthConfig& cfg);

double logistic(double z) noexcept;

/// Upper bound C(n, k) * C(n - k, k) on enumerated configurations.
inline constexpr std::uint64_t kOracleGuard = 10'000'000;

/// Exact conditional rates by enumerating every equally likely
/// (roster1, roster2) draw. Throws GuardExceeded beyond kOracleGuard.
PairProbabilities oracle_pair_probabilities(const SynthConfig& cfg, const AgentId& x, const AgentId& y);

} // namespace harmony::synth
