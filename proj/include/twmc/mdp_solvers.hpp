#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "twmc/discounted.hpp"
#include "twmc/model.hpp"
#include "twmc/report.hpp"
#include "twmc/tree_decomposition.hpp"

namespace twmc {

struct HittingObjective {
    TargetSet targets;
};

struct DiscountedObjective {
    DiscountedSpec spec;
};

using Objective = std::variant<HittingObjective, DiscountedObjective>;

enum class Evaluator { TreeDecomposition, Simple };

/// Values of the chain induced by sigma. td is required for the
/// TreeDecomposition evaluator and ignored otherwise.
std::vector<double> evaluate_strategy(const MarkovDecisionProcess& mdp, const Strategy& sigma,
                                      const Objective& objective, const TreeDecomposition* td,
                                      Evaluator evaluator = Evaluator::TreeDecomposition,
                                      const SolveOptions& options = {}, std::uint64_t* work = nullptr);

/// Choice of the smallest successor id at every Player1 vertex.
Strategy initial_strategy(const MarkovDecisionProcess& mdp);

struct SiOptions {
    Evaluator evaluator = Evaluator::TreeDecomposition;
    // Record values and strategy of every round in the report.
    bool trace = false;
    SolveOptions solve;
};

/// Policy iteration from initial_strategy. A Player1 vertex switches only
/// when some successor beats its current choice by more than 1e-10; it then
/// takes the smallest id within 1e-10 of the best. Throws NumericalError
/// after 10 |V| rounds without convergence.
SolverReport strategy_iteration(const MarkovDecisionProcess& mdp, const Objective& objective,
                                const TreeDecomposition* td, const SiOptions& options = {});

struct ViOptions {
    double epsilon = 1e-10;
    std::size_t max_iters = 1000000;
    std::optional<Clock::time_point> deadline;
};

/// Jacobi Bellman sweeps from 0 (targets pinned to 1 for hitting). Stops
/// once the largest change drops below epsilon; otherwise returns the last
/// iterate with converged = false. kappa is the sweep count and strategy is
/// greedy with respect to the final values.
SolverReport value_iteration(const MarkovDecisionProcess& mdp, const Objective& objective,
                             const ViOptions& options = {});

}  // namespace twmc
