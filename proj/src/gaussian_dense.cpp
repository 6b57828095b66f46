#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "twmc/linsys.hpp"

namespace twmc {

namespace {

// Below this fraction of its row's scale a remaining entry cannot serve as pivot.
constexpr double kPivotTol = 1e-10;
constexpr double kRhsTol = 1e-9;

double physical_memory_bytes() {
    long pages = sysconf(_SC_PHYS_PAGES);
    long page = sysconf(_SC_PAGE_SIZE);
    if (pages <= 0 || page <= 0) {
        return 0.0;
    }
    return static_cast<double>(pages) * static_cast<double>(page);
}

}  // namespace

LinsysSolution gaussian_dense(const LinearSystem& sys, const DenseOptions& options) {
    const auto started = Clock::now();
    auto violations = validate_system(sys);
    if (!violations.empty()) {
        throw InvalidInput("invalid linear system: " + violations.front().detail);
    }
    const std::size_t n = static_cast<std::size_t>(sys.unknown_count);
    const std::size_t m = sys.equations.size();
    if (sys.unknown_count > options.dense_limit) {
        throw LimitExceeded("dense solver limit exceeded: " + std::to_string(n) + " unknowns > " +
                            std::to_string(options.dense_limit));
    }
    const std::size_t width = n + 1;
    const double bytes = static_cast<double>(m) * static_cast<double>(width) * sizeof(double);
    const double physical = physical_memory_bytes();
    if (physical > 0.0 && bytes > 0.8 * physical) {
        throw LimitExceeded("dense matrix needs " + std::to_string(bytes / 1e9) + " GB, machine has " +
                            std::to_string(physical / 1e9) + " GB");
    }

    std::vector<double> a(m * width, 0.0);
    std::vector<double> scale(m, 0.0);
    std::vector<double> rhs_scale(m, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
        double* row = &a[r * width];
        for (const auto& t : sys.equations[r].terms) {
            row[t.var] += t.coef;
        }
        row[n] = sys.equations[r].rhs;
        for (std::size_t c = 0; c < n; ++c) {
            scale[r] = std::max(scale[r], std::abs(row[c]));
        }
        rhs_scale[r] = std::abs(row[n]);
    }

    LinsysSolution sol;
    std::vector<std::size_t> pivot_col;
    std::size_t rank = 0;
    bool free_column = false;
    for (std::size_t c = 0; c < n; ++c) {
        if (c % 64 == 0) {
            check_deadline(options.deadline);
        }
        std::size_t best = m;
        double best_abs = 0.0;
        for (std::size_t r = rank; r < m; ++r) {
            double v = std::abs(a[r * width + c]);
            if (v > kPivotTol * scale[r] && v > best_abs) {
                best = r;
                best_abs = v;
            }
        }
        if (best == m) {
            free_column = true;
            continue;
        }
        if (best != rank) {
            std::swap_ranges(a.begin() + best * width, a.begin() + (best + 1) * width, a.begin() + rank * width);
            std::swap(scale[best], scale[rank]);
            std::swap(rhs_scale[best], rhs_scale[rank]);
        }
        const double* p = &a[rank * width];
        for (std::size_t r = rank + 1; r < m; ++r) {
            double* row = &a[r * width];
            if (row[c] == 0.0) {
                continue;
            }
            double f = row[c] / p[c];
            row[c] = 0.0;
            for (std::size_t j = c + 1; j < width; ++j) {
                row[j] -= f * p[j];
            }
            scale[r] = std::max(scale[r], std::abs(f) * scale[rank]);
            rhs_scale[r] = std::max(rhs_scale[r], std::abs(f) * rhs_scale[rank]);
            sol.report.work_counter += width - c;
        }
        pivot_col.push_back(c);
        ++rank;
    }

    for (std::size_t r = rank; r < m; ++r) {
        if (std::abs(a[r * width + n]) > kRhsTol * rhs_scale[r]) {
            sol.outcome.status = SolveStatus::Unsatisfiable;
            sol.report.wall_time = std::chrono::duration<double>(Clock::now() - started).count();
            return sol;
        }
    }
    if (free_column) {
        sol.outcome.status = SolveStatus::Underdetermined;
        sol.report.wall_time = std::chrono::duration<double>(Clock::now() - started).count();
        return sol;
    }

    std::vector<double> x(n, 0.0);
    for (std::size_t i = rank; i-- > 0;) {
        const double* row = &a[i * width];
        std::size_t c = pivot_col[i];
        double r = row[n];
        for (std::size_t j = c + 1; j < n; ++j) {
            r -= row[j] * x[j];
        }
        x[c] = r / row[c];
    }
    sol.outcome.status = SolveStatus::Unique;
    sol.outcome.assignment = std::move(x);
    sol.report.values = sol.outcome.assignment;
    sol.report.eliminated = rank;
    sol.report.wall_time = std::chrono::duration<double>(Clock::now() - started).count();
    return sol;
}

}  // namespace twmc
