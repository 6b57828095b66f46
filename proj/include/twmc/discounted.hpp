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

struct DiscountedSpec {
    double lambda = 0.5;
};

/// Throws InvalidInput unless 1e-6 <= lambda < 1. Values below 1e-6 are
/// rejected because elimination divides by lambda.
void validate_spec(const DiscountedSpec& spec);

struct DiscountedResult {
    std::vector<double> value;
    // Value of the auxiliary unit vertex; 1 by construction.
    double one_hat_value = 1.0;
};

struct DiscountedSolution {
    DiscountedResult result;
    SolverReport report;
};

struct OneHatChain {
    MarkovChain chain;
    Vertex one_hat = kNoVertex;
    std::optional<TreeDecomposition> td;
};

/// Appends vertex n with a weight-1 self-loop of reward 1 - lambda, whose
/// discounted value is exactly 1, and adds it to every bag of td.
OneHatChain add_one_hat(const MarkovChain& mc, const DiscountedSpec& spec, const TreeDecomposition* td);

struct MergedEdge {
    Transition edge;
    // The weights summed to zero; edge is absent and the reward mass
    // moves to the unit vertex with weight one_hat_weight.
    bool cancelled = false;
    double one_hat_weight = 0.0;
};

/// delta = d1 + d2, r = (d1 r1 + d2 r2) / delta. When |delta| <= 1e-12 the
/// constant d1 r1 + d2 r2 is rerouted as weight (d1 r1 + d2 r2) / lambda.
MergedEdge merge_parallel_edges(Transition e1, Transition e2, double lambda);

/// Adds t to the edge (u, v), merging with an existing one. Zero-weight
/// edges are not materialized.
void add_edge_disc(WorkingGraph& graph, Vertex u, Vertex v, Transition t, Vertex one_hat, double lambda);

/// Rewrites y_u = d (r + lambda y_u) + rest as y_u = rest / (1 - lambda d)
/// plus a constant edge to the unit vertex. No-op without a self-loop.
/// Throws NumericalError ("divergent self-loop") if |1 - lambda d| < 1e-12.
void resolve_self_loop_disc(WorkingGraph& graph, Vertex u, Vertex one_hat, double lambda);

struct DiscountedRow {
    Vertex vertex = kNoVertex;
    std::vector<std::pair<Vertex, Transition>> successors;
};

/// Resolves u's self-loop, then for each predecessor p with edge (d0, r0)
/// adds (p, one_hat) with weight d0 r0 / lambda and reward 0, and (p, v_i)
/// with weight d0 d_i lambda and reward r_i for every successor. u's final
/// row is returned for back-substitution.
DiscountedRow eliminate_vertex_disc(WorkingGraph& graph, Vertex u, Vertex one_hat, double lambda);

/// Expected discounted sums, eliminating in the leaf-bag order of td.
DiscountedSolution solve_discounted_td(const MarkovChain& mc, const DiscountedSpec& spec,
                                       const TreeDecomposition& td, const SolveOptions& options = {});

/// Same contract, eliminating in ascending id order.
DiscountedSolution solve_discounted_simple(const MarkovChain& mc, const DiscountedSpec& spec,
                                           const SolveOptions& options = {});

/// y_u - lambda sum delta(u)(v) y_v = sum delta(u)(v) R(u, v).
LinearSystem discounted_system(const MarkovChain& mc, const DiscountedSpec& spec);

}  // namespace twmc
