#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace twmc {

/// Dense vertex (or unknown) identifier, 0..n-1.
using Vertex = std::int32_t;
using BagId = std::int32_t;

inline constexpr Vertex kNoVertex = -1;

/// Row sums of stochastic rows must match 1 within this bound.
inline constexpr double kProbabilityTolerance = 1e-9;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed model, decomposition, system or arguments.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// A pivot or self-loop too close to singular to divide by.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Configured size, memory or iteration limit hit.
class LimitExceeded : public Error {
public:
    using Error::Error;
};

class Timeout : public Error {
public:
    using Error::Error;
};

/// One broken invariant found by a validator.
struct Violation {
    std::string rule;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

/// Knobs shared by the elimination-based solvers.
struct SolveOptions {
    // Check the neighbourhood bound (every neighbour of an eliminated vertex
    // lies in its bag) and the leaf-removal subset rule at every step.
    bool audit = false;
    // Relative threshold below which a coefficient counts as zero.
    double zero_tol = 1e-12;
    std::optional<Clock::time_point> deadline;
};

/// Throws Timeout once `deadline` has passed. Cheap enough to call every step.
inline void check_deadline(const std::optional<Clock::time_point>& deadline) {
    if (deadline && Clock::now() > *deadline) {
        throw Timeout("deadline exceeded");
    }
}

}  // namespace twmc
