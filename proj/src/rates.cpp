#include "harmony/rates.hpp"

#include "harmony/errors.hpp"

namespace harmony {

double smoothed_rate(std::uint64_t wins, std::uint64_t games, double alpha) {
    return (static_cast<double>(wins) + alpha) / (static_cast<double>(games) + 2.0 * alpha);
}

double solo_rate(const CountTable& table, const AgentId& x, double alpha) {
    const Tally t = table.agent(x);
    if (t.games == 0) {
        throw Error(ErrorCode::InsufficientData, "insufficient data: agent " + x.str() + " has no games",
                    {{"agent", x.str()}, {"games", t.games}});
    }
    return smoothed_rate(t.wins, t.games, alpha);
}

PairProbabilities pair_rates(const CountTable& table, const AgentId& x, const AgentId& y, double alpha) {
    if (x == y) {
        throw Error(ErrorCode::InvalidArgument, "pair_rates needs two distinct agents", {{"agent", x.str()}});
    }
    const Tally tx = table.agent(x);
    const Tally ty = table.agent(y);
    const Tally tj = table.pair(x, y);

    auto insufficient = [&](const char* which, std::uint64_t games) {
        return Error(ErrorCode::InsufficientData,
                     std::string("insufficient data: zero ") + which + " games for " + x.str() + "/" + y.str(),
                     {{"denominator", which},
                      {"x", x.str()},
                      {"y", y.str()},
                      {"games", games},
                      {"x_games", tx.games},
                      {"y_games", ty.games},
                      {"joint_games", tj.games}});
    };
    if (tj.games == 0) {
        throw insufficient("joint", 0);
    }
    if (tx.games <= tj.games) {
        throw insufficient("x_without_y", 0);
    }
    if (ty.games <= tj.games) {
        throw insufficient("y_without_x", 0);
    }

    PairProbabilities p{.x = x, .y = y};
    p.n_x = tx.games;
    p.n_y = ty.games;
    p.n_joint = tj.games;
    p.n_x_not_y = tx.games - tj.games;
    p.n_y_not_x = ty.games - tj.games;
    p.p_x = smoothed_rate(tx.wins, tx.games, alpha);
    p.p_y = smoothed_rate(ty.wins, ty.games, alpha);
    p.p_joint = smoothed_rate(tj.wins, tj.games, alpha);
    p.p_x_not_y = smoothed_rate(tx.wins - tj.wins, p.n_x_not_y, alpha);
    p.p_y_not_x = smoothed_rate(ty.wins - tj.wins, p.n_y_not_x, alpha);
    return p;
}

} // namespace harmony
