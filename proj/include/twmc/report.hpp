#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "twmc/common.hpp"

namespace twmc {

/// Pure memoryless strategy: choice[v] is the successor picked at Player1
/// vertex v, kNoVertex elsewhere.
struct Strategy {
    std::vector<Vertex> choice;

    bool operator==(const Strategy&) const = default;
};

/// What a solver run produced plus the instrumentation the benchmarks read.
struct SolverReport {
    std::vector<double> values;
    std::optional<Strategy> strategy;
    // Strategy-iteration rounds (or value-iteration sweeps).
    std::size_t kappa = 0;
    // Edge/coefficient updates performed by elimination.
    std::uint64_t work_counter = 0;
    double wall_time = 0.0;
    std::size_t eliminated = 0;
    // Audit findings; always zero unless SolveOptions::audit found a problem.
    std::uint64_t audit_violations = 0;
    bool converged = true;
    // Per-round history, filled by strategy iteration when requested.
    std::vector<std::vector<double>> value_trace;
    std::vector<Strategy> strategy_trace;
};

}  // namespace twmc
