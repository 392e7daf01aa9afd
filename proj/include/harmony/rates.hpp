#pragma once

#include <cstdint>

#include "harmony/agent_id.hpp"
#include "harmony/count_table.hpp"

namespace harmony {

/// The five conditional win rates for one ordered pair (x, y), with the
/// sample sizes behind each conditioning event. "Without" conditions on
/// the examined side only: y on the opposing side still counts as
/// "x without y".
struct PairProbabilities {
    AgentId x;
    AgentId y;
    double p_x = 0.0;        // P(win | x on side)
    double p_y = 0.0;        // P(win | y on side)
    double p_joint = 0.0;    // P(win | x and y on side)
    double p_x_not_y = 0.0;  // P(win | x on side, y not)
    double p_y_not_x = 0.0;  // P(win | y on side, x not)
    std::uint64_t n_x = 0;
    std::uint64_t n_y = 0;
    std::uint64_t n_joint = 0;
    std::uint64_t n_x_not_y = 0;
    std::uint64_t n_y_not_x = 0;
};

/// (wins + alpha) / (games + 2 alpha). alpha = 0 is the raw quotient.
double smoothed_rate(std::uint64_t wins, std::uint64_t games, double alpha = 0.0);

/// agent_wins / agent_games. Throws InsufficientData (with the games count)
/// for absent agents.
double solo_rate(const CountTable& table, const AgentId& x, double alpha = 0.0);

/// Throws InvalidArgument when x == y and InsufficientData naming the zero
/// denominator ("joint", "x_without_y", "y_without_x") otherwise.
PairProbabilities pair_rates(const CountTable& table, const AgentId& x, const AgentId& y, double alpha = 0.0);

} // namespace harmony
