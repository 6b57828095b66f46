#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "twmc/linsys.hpp"
#include "twmc/model.hpp"
#include "twmc/report.hpp"
#include "twmc/tree_decomposition.hpp"
#include "twmc/working_graph.hpp"

namespace twmc {

struct HitResult {
    std::vector<double> prob;
    // Vertices that cannot reach a target; their probability is 0.
    std::vector<Vertex> removed_zero;
};

struct HitSolution {
    HitResult result;
    SolverReport report;
};

struct MergedTargets {
    MarkovChain chain;
    Vertex target = kNoVertex;
    std::optional<TreeDecomposition> td;
};

/// Collapses a target set into one vertex. With a single target the inputs
/// come back unchanged. Otherwise a fresh vertex n gets a weight-1 self-loop,
/// every old target's row is replaced by one weight-1 edge to it, and (when
/// a decomposition is given) the fresh vertex joins every bag.
MergedTargets merge_targets(const MarkovChain& mc, const TargetSet& targets, const TreeDecomposition* td);

/// Post-redistribution successor row of an eliminated vertex.
struct EliminatedRow {
    Vertex vertex = kNoVertex;
    bool absorbing = false;
    std::vector<std::pair<Vertex, double>> successors;
};

/// Removes u from the working graph while preserving the hitting
/// probabilities of every other vertex. A vertex flagged as an input trap
/// (self-loop of exactly 1) is dropped with probability 0. Otherwise the
/// self-loop mass is spread over the remaining successors by 1/(1 - loop),
/// and each predecessor p gains delta(p)(u) * delta(u)(v) on every successor v.
/// Throws NumericalError when the loop weight is within 1e-12 of 1.
EliminatedRow eliminate_vertex_hit(WorkingGraph& graph, Vertex u, bool input_absorbing = false);

/// Hitting probabilities to `targets`, eliminating vertices in the leaf-bag
/// order of `td`. Throws InvalidInput if td is not a decomposition of the
/// chain's skeleton.
HitSolution solve_hitting_td(const MarkovChain& mc, const TargetSet& targets, const TreeDecomposition& td,
                             const SolveOptions& options = {});

/// Same contract as solve_hitting_td, eliminating in ascending id order.
HitSolution solve_hitting_simple(const MarkovChain& mc, const TargetSet& targets, const SolveOptions& options = {});

/// The defining system: x_t = 1 on targets, x_u = 0 where no target is
/// reachable, x_u = sum delta(u)(v) x_v elsewhere.
LinearSystem hitting_system(const MarkovChain& mc, const TargetSet& targets);

namespace detail {

/// Throws InvalidInput if mc is not a genuine stochastic chain.
void require_strict(const MarkovChain& mc);

/// Shared pipeline: single target, weights may be arbitrary reals. With a
/// null td the elimination order is ascending id. td must already contain
/// `target` in some bag.
HitSolution solve_single_target(const MarkovChain& chain, Vertex target, const TreeDecomposition* td,
                                const SolveOptions& options);

/// Throws InvalidInput listing the first violations if td does not
/// decompose the skeleton of `adj`.
void require_valid_td(const Adjacency& adj, const TreeDecomposition& td);

}  // namespace detail

}  // namespace twmc
