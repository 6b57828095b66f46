#pragma once

#include <vector>

#include "twmc/model.hpp"
#include "twmc/report.hpp"
#include "twmc/tree_decomposition.hpp"

namespace twmc {

struct SccDecomposition {
    std::vector<int> component;           // per vertex
    std::vector<char> is_bottom;          // per component
    std::vector<Vertex> representative;   // per component, smallest member id
    std::vector<std::vector<Vertex>> members;  // per component, ascending

    int component_count() const { return static_cast<int>(members.size()); }
};

/// Iterative Tarjan. Components are numbered by ascending representative.
SccDecomposition scc_decompose(const Adjacency& adj);
SccDecomposition scc_decompose(const MarkovChain& mc);

struct LimitingDistribution {
    std::vector<double> vertex_weight;
    std::vector<double> edge_weight;  // aligned with chain.edges()
};

/// Stationary distribution of an ergodic chain: solves the stationarity
/// equations with x_0 pinned to 1 and rescales to sum 1. td (may be null)
/// is used if it decomposes the primal graph of those equations.
LimitingDistribution limiting_distribution(const MarkovChain& bscc, const TreeDecomposition* td,
                                           const SolveOptions& options = {});

struct MeanPayoffResult {
    std::vector<double> value;
    SccDecomposition scc;
    std::vector<double> component_value;  // bottom components only; 0 elsewhere
};

struct MeanPayoffSolution {
    MeanPayoffResult result;
    SolverReport report;
};

/// Expected mean payoff from every vertex. Bottom components get the
/// reward averaged under their limiting distribution; transient vertices
/// get one generalized hitting solve in which every representative b_i
/// moves to a fresh target with weight equal to its component value.
MeanPayoffSolution solve_mean_payoff(const MarkovChain& mc, const TreeDecomposition& td,
                                     const SolveOptions& options = {});

}  // namespace twmc
