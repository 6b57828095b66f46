#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "twmc/common.hpp"
#include "twmc/report.hpp"
#include "twmc/tree_decomposition.hpp"

namespace twmc {

struct Term {
    Vertex var = 0;
    double coef = 0.0;

    bool operator==(const Term&) const = default;
};

/// sum(coef * x_var) = rhs
struct Equation {
    std::vector<Term> terms;
    double rhs = 0.0;

    bool operator==(const Equation&) const = default;
};

struct LinearSystem {
    Vertex unknown_count = 0;
    std::vector<Equation> equations;

    bool operator==(const LinearSystem&) const = default;
};

/// Out-of-range unknowns and non-finite numbers.
std::vector<Violation> validate_system(const LinearSystem& sys);

struct PrimalGraph {
    Vertex unknown_count = 0;
    std::vector<GraphEdge> edges;  // u < v, sorted, unique
};

/// Unknowns x, y are adjacent iff some equation has both with a nonzero
/// coefficient.
PrimalGraph build_primal(const LinearSystem& sys);

enum class SolveStatus { Unique, Unsatisfiable, Underdetermined };

struct SolveOutcome {
    SolveStatus status = SolveStatus::Unique;
    std::vector<double> assignment;  // only for Unique
};

struct LinsysSolution {
    SolveOutcome outcome;
    SolverReport report;
};

/// Rows returned by gram_schmidt_reduce. `scale` tracks the magnitude of
/// the numbers that went into each row, so cancellation noise can be told
/// apart from genuine coefficients.
struct ScaledEquation {
    Equation eq;
    double scale = 1.0;
    double rhs_scale = 0.0;
};

struct ReducedRows {
    bool unsatisfiable = false;
    std::vector<ScaledEquation> rows;
};

/// Modified Gram-Schmidt over the union support of `rows`, carrying the rhs
/// along. A row whose remainder has norm below 1e-9 of its original norm (or
/// scale) is dependent; if its rhs remainder is not similarly small the set
/// is unsatisfiable. Output rows are orthonormal in their coefficients.
ReducedRows gram_schmidt_reduce(const std::vector<ScaledEquation>& rows, double zero_tol = 1e-12);
ReducedRows gram_schmidt_reduce(const std::vector<Equation>& rows, double zero_tol = 1e-12);

/// Eliminates unknowns in the leaf-bag order of td (which must decompose
/// the primal graph; InvalidInput otherwise). Unsatisfiability anywhere wins
/// over an unconstrained unknown.
LinsysSolution solve_system_td(const LinearSystem& sys, const PrimalGraph& primal, const TreeDecomposition& td,
                               const SolveOptions& options = {});

/// Solves sys together with x_pin = 1. Throws NumericalError unless that
/// augmented system has exactly one solution.
std::vector<double> solve_pinned_homogeneous(const LinearSystem& sys, const PrimalGraph& primal,
                                             const TreeDecomposition& td, Vertex pin,
                                             const SolveOptions& options = {});

struct DenseOptions {
    Vertex dense_limit = 20000;
    std::optional<Clock::time_point> deadline;
};

/// Partial-pivoting Gaussian elimination on a dense copy of the system.
/// Throws LimitExceeded when n exceeds dense_limit or the dense matrix
/// would not fit in physical memory.
LinsysSolution gaussian_dense(const LinearSystem& sys, const DenseOptions& options = {});

/// Largest |lhs - rhs| over all equations.
double max_residual(const LinearSystem& sys, const std::vector<double>& x);

}  // namespace twmc
