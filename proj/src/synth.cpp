#include "harmony/synth.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "harmony/errors.hpp"

namespace harmony::synth {

using nlohmann::json;

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t block_seed(std::uint64_t seed, std::uint64_t block) noexcept {
    return splitmix64(seed + block * 0x9E3779B97F4A7C15ull);
}

double logistic(double z) noexcept {
    if (z >= 0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

namespace {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    long double r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r = r * static_cast<long double>(n - k + i) / static_cast<long double>(i);
    }
    if (r > static_cast<long double>(std::numeric_limits<std::uint64_t>::max())) {
        return std::numeric_limits<std::uint64_t>::max();
    }
    return static_cast<std::uint64_t>(std::llround(r));
}

// Portable draws on top of the raw mt19937_64 stream; std distributions are
// implementation-defined and would break cross-platform reproducibility.
double uniform01(std::mt19937_64& eng) { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }

std::uint64_t uniform_below(std::mt19937_64& eng, std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t v;
    do {
        v = eng();
    } while (v >= limit);
    return v % n;
}

// Dense strength vector and symmetric synergy matrix indexed like agent_ids().
struct Model {
    std::vector<AgentId> ids;
    std::vector<double> strength;
    std::vector<double> synergy;  // n * n
    std::size_t n = 0;

    explicit Model(const SynthConfig& cfg) : ids(cfg.agent_ids()), n(ids.size()) {
        strength.assign(n, 0.0);
        synergy.assign(n * n, 0.0);
        auto pos = [&](const AgentId& id) {
            return static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
        };
        for (const auto& [id, s] : cfg.base_strengths) {
            strength[pos(id)] = s;
        }
        for (const auto& [p, s] : cfg.synergies) {
            const auto i = pos(p.first());
            const auto j = pos(p.second());
            synergy[i * n + j] = s;
            synergy[j * n + i] = s;
        }
    }

    template <typename It>
    double score(It begin, It end) const {
        double s = 0.0;
        for (auto i = begin; i != end; ++i) {
            s += strength[*i];
            for (auto j = std::next(i); j != end; ++j) {
                s += synergy[*i * n + *j];
            }
        }
        return s;
    }

    double score_mask(std::uint64_t mask) const {
        std::size_t members[64];
        std::size_t k = 0;
        while (mask) {
            members[k++] = static_cast<std::size_t>(std::countr_zero(mask));
            mask &= mask - 1;
        }
        return score(members, members + k);
    }
};

} // namespace

void SynthConfig::validate() const {
    if (team_size < 1) {
        throw Error(ErrorCode::InvalidArgument, "team_size must be >= 1");
    }
    if (num_agents < 2 * team_size) {
        throw Error(ErrorCode::InvalidArgument, "num_agents must be >= 2 * team_size",
                    {{"num_agents", num_agents}, {"team_size", team_size}});
    }
    const auto ids = agent_ids();
    auto known = [&](const AgentId& id) { return std::binary_search(ids.begin(), ids.end(), id); };
    for (const auto& [id, s] : base_strengths) {
        if (!known(id)) {
            throw Error(ErrorCode::InvalidArgument, "base_strengths names unknown agent " + id.str());
        }
        if (!std::isfinite(s)) {
            throw Error(ErrorCode::InvalidArgument, "non-finite strength for " + id.str());
        }
    }
    for (const auto& [p, s] : synergies) {
        if (!known(p.first()) || !known(p.second())) {
            throw Error(ErrorCode::InvalidArgument,
                        "synergies names unknown agent pair " + p.first().str() + "/" + p.second().str());
        }
        if (!std::isfinite(s)) {
            throw Error(ErrorCode::InvalidArgument, "non-finite synergy");
        }
    }
}

std::vector<AgentId> SynthConfig::agent_ids() const {
    const std::size_t width = std::max<std::size_t>(2, std::to_string(num_agents > 0 ? num_agents - 1 : 0).size());
    std::vector<AgentId> ids;
    ids.reserve(num_agents);
    for (std::size_t i = 0; i < num_agents; ++i) {
        auto digits = std::to_string(i);
        ids.emplace_back("A" + std::string(width - digits.size(), '0') + digits);
    }
    return ids;
}

SynthConfig SynthConfig::from_json(const json& j) {
    try {
        SynthConfig cfg;
        cfg.num_agents = j.at("num_agents").get<std::size_t>();
        cfg.team_size = j.value("team_size", std::size_t{5});
        cfg.num_matches = j.at("num_matches").get<std::uint64_t>();
        cfg.seed = j.value("seed", std::uint64_t{0});
        const auto ids = cfg.agent_ids();
        if (auto it = j.find("base_strengths"); it != j.end()) {
            if (it->is_array()) {
                if (it->size() > ids.size()) {
                    throw Error(ErrorCode::InvalidArgument, "base_strengths array longer than num_agents");
                }
                for (std::size_t i = 0; i < it->size(); ++i) {
                    cfg.base_strengths.emplace(ids[i], (*it)[i].get<double>());
                }
            } else {
                for (const auto& [k, v] : it->items()) {
                    cfg.base_strengths.emplace(AgentId(k), v.get<double>());
                }
            }
        }
        if (auto it = j.find("synergies"); it != j.end()) {
            for (const auto& s : *it) {
                cfg.synergies[AgentPair(AgentId(s.at("a").get<std::string>()), AgentId(s.at("b").get<std::string>()))] =
                    s.at("value").get<double>();
            }
        }
        cfg.validate();
        return cfg;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Parse, std::string("synth config: ") + e.what());
    }
}

json SynthConfig::to_json() const {
    json j;
    j["num_agents"] = num_agents;
    j["team_size"] = team_size;
    j["num_matches"] = num_matches;
    j["seed"] = seed;
    json bs = json::object();
    for (const auto& [id, s] : base_strengths) bs[id.str()] = s;
    j["base_strengths"] = bs;
    json syn = json::array();
    for (const auto& [p, s] : synergies) syn.push_back({{"a", p.first().str()}, {"b", p.second().str()}, {"value", s}});
    j["synergies"] = syn;
    return j;
}

void generate_range(const SynthConfig& cfg, std::uint64_t begin, std::uint64_t end,
                    const std::function<void(MatchRecord&&)>& sink) {
    cfg.validate();
    end = std::min(end, cfg.num_matches);
    if (begin >= end) {
        return;
    }
    const Model model(cfg);
    const std::size_t k = cfg.team_size;
    std::vector<std::size_t> perm(model.n);

    for (std::uint64_t block = begin / kBlockSize; block * kBlockSize < end; ++block) {
        std::mt19937_64 eng(block_seed(cfg.seed, block));
        const std::uint64_t first = block * kBlockSize;
        const std::uint64_t last = std::min(end, first + kBlockSize);
        for (std::uint64_t m = first; m < last; ++m) {
            std::iota(perm.begin(), perm.end(), std::size_t{0});
            for (std::size_t i = 0; i < 2 * k; ++i) {
                const auto j = i + static_cast<std::size_t>(uniform_below(eng, model.n - i));
                std::swap(perm[i], perm[j]);
            }
            const double u = uniform01(eng);
            if (m < begin) {
                continue;
            }
            std::sort(perm.begin(), perm.begin() + k);
            std::sort(perm.begin() + k, perm.begin() + 2 * k);
            const double s1 = model.score(perm.begin(), perm.begin() + k);
            const double s2 = model.score(perm.begin() + k, perm.begin() + 2 * k);
            const bool side1_wins = u < logistic(s1 - s2);

            MatchRecord rec;
            rec.match_id = "m" + std::to_string(m);
            auto& w = side1_wins ? rec.winners : rec.losers;
            auto& l = side1_wins ? rec.losers : rec.winners;
            for (std::size_t i = 0; i < k; ++i) {
                w.push_back(model.ids[perm[i]]);
                l.push_back(model.ids[perm[k + i]]);
            }
            sink(std::move(rec));
        }
    }
}

std::vector<MatchRecord> generate_dataset(const SynthConfig& cfg) {
    std::vector<MatchRecord> out;
    out.reserve(cfg.num_matches);
    generate_range(cfg, 0, cfg.num_matches, [&](MatchRecord&& r) { out.push_back(std::move(r)); });
    return out;
}

PairProbabilities oracle_pair_probabilities(const SynthConfig& cfg, const AgentId& x, const AgentId& y) {
    cfg.validate();
    if (x == y) {
        throw Error(ErrorCode::InvalidArgument, "oracle needs two distinct agents");
    }
    const std::uint64_t configs = binomial(cfg.num_agents, cfg.team_size) *
                                  binomial(cfg.num_agents - cfg.team_size, cfg.team_size);
    if (cfg.num_agents > 63 || configs > kOracleGuard) {
        throw Error(ErrorCode::GuardExceeded, "roster enumeration exceeds guard",
                    {{"configurations", configs}, {"guard", kOracleGuard}});
    }
    const Model model(cfg);
    auto pos = [&](const AgentId& id) -> std::size_t {
        auto it = std::lower_bound(model.ids.begin(), model.ids.end(), id);
        if (it == model.ids.end() || *it != id) {
            throw Error(ErrorCode::NotFound, "unknown agent " + id.str());
        }
        return static_cast<std::size_t>(it - model.ids.begin());
    };
    const std::uint64_t bx = 1ull << pos(x);
    const std::uint64_t by = 1ull << pos(y);

    std::vector<std::uint64_t> masks;
    std::vector<double> scores;
    // Gosper's hack: all k-subsets of n bits in increasing order.
    const std::uint64_t limit = 1ull << cfg.num_agents;
    for (std::uint64_t m = (1ull << cfg.team_size) - 1; m < limit;) {
        masks.push_back(m);
        scores.push_back(model.score_mask(m));
        const std::uint64_t c = m & (~m + 1);
        const std::uint64_t r = m + c;
        m = (((r ^ m) >> 2) / c) | r;
    }

    struct Acc {
        double sum = 0.0;
        std::uint64_t n = 0;
        void add(double p) {
            sum += p;
            ++n;
        }
        double rate() const { return n ? sum / static_cast<double>(n) : 0.0; }
    } ax, ay, aj, axny, aynx;

    for (std::size_t i = 0; i < masks.size(); ++i) {
        const std::uint64_t side = masks[i];
        const bool has_x = side & bx;
        const bool has_y = side & by;
        if (!has_x && !has_y) {
            continue;
        }
        for (std::size_t j = 0; j < masks.size(); ++j) {
            if (side & masks[j]) {
                continue;
            }
            const double p = logistic(scores[i] - scores[j]);
            if (has_x) ax.add(p);
            if (has_y) ay.add(p);
            if (has_x && has_y) aj.add(p);
            if (has_x && !has_y) axny.add(p);
            if (has_y && !has_x) aynx.add(p);
        }
    }
    PairProbabilities out{.x = x, .y = y};
    out.p_x = ax.rate();
    out.p_y = ay.rate();
    out.p_joint = aj.rate();
    out.p_x_not_y = axny.rate();
    out.p_y_not_x = aynx.rate();
    out.n_x = ax.n;
    out.n_y = ay.n;
    out.n_joint = aj.n;
    out.n_x_not_y = axny.n;
    out.n_y_not_x = aynx.n;
    return out;
}

} // namespace harmony::synth
