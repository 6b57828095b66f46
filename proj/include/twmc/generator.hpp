#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "twmc/discounted.hpp"
#include "twmc/model.hpp"
#include "twmc/tree_decomposition.hpp"

namespace twmc {

/// mt19937_64 seeded through SplitMix64 so that nearby seeds and stream ids
/// give unrelated sequences. Draws avoid std distributions, whose output is
/// implementation-defined.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next() { return engine_(); }
    /// Uniform in [0, 1) with 53 random bits.
    double uniform();
    /// Uniform in (0, 1).
    double open_uniform();
    /// Uniform integer in [0, bound), bound > 0.
    std::uint64_t below(std::uint64_t bound);
    /// Uniform integer in [lo, hi].
    std::int64_t between(std::int64_t lo, std::int64_t hi);
    bool chance(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t& state);

enum class GenKind { CfgLike, Path, Cycle, GridBand };

GenKind parse_gen_kind(const std::string& name);
std::string gen_kind_name(GenKind kind);

struct GenConfig {
    GenKind kind = GenKind::CfgLike;
    Vertex n = 100;
    int width_cap = 4;
    std::uint64_t seed = 1;
    double player_prob = 0.5;
    std::int64_t reward_lo = -1000;
    std::int64_t reward_hi = 1000;
};

struct Instance {
    MarkovDecisionProcess mdp;
    TreeDecomposition td;
    TargetSet targets;
    DiscountedSpec spec;
};

/// Deterministic in cfg. cfg-like instances are structured programs
/// (sequences, if-then, if-else, while loops with breaks to enclosing loop
/// exits) whose decomposition is built alongside and has width at most
/// width_cap. Every vertex has out-degree 1 or 2, the final exit loops on
/// itself. Probabilistic rows get normalized i.i.d. uniform weights, each
/// vertex turns Player1 with probability player_prob, rewards are integers
/// in [reward_lo, reward_hi], one target per weakly connected component,
/// lambda uniform in (0.01, 0.99).
Instance generate(const GenConfig& cfg);

/// Player1 rows become uniform over their successors.
MarkovChain to_mc(const MarkovDecisionProcess& mdp);

}  // namespace twmc
