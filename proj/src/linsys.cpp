#include "twmc/linsys.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace twmc {

namespace {

// Remainder/original norm ratio below which a row counts as dependent.
constexpr double kDependentRatio = 1e-9;

Equation canonical(const Equation& eq) {
    Equation out;
    out.rhs = eq.rhs;
    out.terms = eq.terms;
    std::sort(out.terms.begin(), out.terms.end(), [](const Term& a, const Term& b) { return a.var < b.var; });
    std::size_t w = 0;
    for (std::size_t i = 0; i < out.terms.size(); ++i) {
        if (w > 0 && out.terms[w - 1].var == out.terms[i].var) {
            out.terms[w - 1].coef += out.terms[i].coef;
        } else {
            out.terms[w++] = out.terms[i];
        }
    }
    out.terms.resize(w);
    std::erase_if(out.terms, [](const Term& t) { return t.coef == 0.0; });
    return out;
}

ScaledEquation with_scale(Equation eq) {
    ScaledEquation s;
    s.eq = canonical(eq);
    s.scale = 0.0;
    for (const auto& t : s.eq.terms) {
        s.scale = std::max(s.scale, std::abs(t.coef));
    }
    s.rhs_scale = std::abs(s.eq.rhs);
    return s;
}

double coef_of(const Equation& eq, Vertex var) {
    auto it = std::lower_bound(eq.terms.begin(), eq.terms.end(), var,
                               [](const Term& t, Vertex v) { return t.var < v; });
    return it != eq.terms.end() && it->var == var ? it->coef : 0.0;
}

bool rhs_consistent(double rhs, double rhs_scale) { return std::abs(rhs) <= kDependentRatio * rhs_scale; }

void require_valid(const LinearSystem& sys) {
    auto violations = validate_system(sys);
    if (!violations.empty()) {
        throw InvalidInput("invalid linear system: " + violations.front().detail);
    }
}

}  // namespace

std::vector<Violation> validate_system(const LinearSystem& sys) {
    std::vector<Violation> out;
    if (sys.unknown_count < 0) {
        out.push_back({"unknown-count", "negative unknown count"});
    }
    for (std::size_t i = 0; i < sys.equations.size(); ++i) {
        const auto& eq = sys.equations[i];
        if (!std::isfinite(eq.rhs)) {
            out.push_back({"finite", "equation " + std::to_string(i) + " has a non-finite rhs"});
        }
        for (const auto& t : eq.terms) {
            if (t.var < 0 || t.var >= sys.unknown_count) {
                out.push_back({"unknown-range", "equation " + std::to_string(i) + " mentions unknown " +
                                                    std::to_string(t.var)});
            } else if (!std::isfinite(t.coef)) {
                out.push_back({"finite", "equation " + std::to_string(i) + " has a non-finite coefficient"});
            }
        }
    }
    return out;
}

PrimalGraph build_primal(const LinearSystem& sys) {
    PrimalGraph g;
    g.unknown_count = sys.unknown_count;
    for (const auto& raw : sys.equations) {
        Equation eq = canonical(raw);
        for (std::size_t i = 0; i < eq.terms.size(); ++i) {
            for (std::size_t j = i + 1; j < eq.terms.size(); ++j) {
                g.edges.emplace_back(eq.terms[i].var, eq.terms[j].var);
            }
        }
    }
    std::sort(g.edges.begin(), g.edges.end());
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
    return g;
}

ReducedRows gram_schmidt_reduce(const std::vector<Equation>& rows, double zero_tol) {
    std::vector<ScaledEquation> scaled;
    scaled.reserve(rows.size());
    for (const auto& r : rows) {
        scaled.push_back(with_scale(r));
    }
    return gram_schmidt_reduce(scaled, zero_tol);
}

ReducedRows gram_schmidt_reduce(const std::vector<ScaledEquation>& rows, double zero_tol) {
    std::vector<Vertex> support;
    for (const auto& r : rows) {
        for (const auto& t : r.eq.terms) {
            support.push_back(t.var);
        }
    }
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    const std::size_t k = support.size();
    auto slot = [&](Vertex v) {
        return static_cast<std::size_t>(std::lower_bound(support.begin(), support.end(), v) - support.begin());
    };

    struct Basis {
        std::vector<double> v;  // k coefficients then rhs
        double scale;
        double rhs_scale;
    };
    std::vector<Basis> basis;
    ReducedRows out;

    for (const auto& row : rows) {
        std::vector<double> v(k + 1, 0.0);
        for (const auto& t : row.eq.terms) {
            v[slot(t.var)] += t.coef;
        }
        v[k] = row.eq.rhs;
        double before = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            before += v[i] * v[i];
        }
        before = std::sqrt(before);
        double scale = row.scale;
        double rhs_scale = std::max(row.rhs_scale, std::abs(row.eq.rhs));

        for (const auto& b : basis) {
            double d = 0.0;
            for (std::size_t i = 0; i < k; ++i) {
                d += v[i] * b.v[i];
            }
            if (d == 0.0) {
                continue;
            }
            for (std::size_t i = 0; i <= k; ++i) {
                v[i] -= d * b.v[i];
            }
            // d itself carries rounding error of order eps * before, which
            // reaches the rhs through b's rhs even when the exact d is zero.
            scale = std::max(scale, std::abs(d) * b.scale);
            rhs_scale = std::max(rhs_scale, std::max(std::abs(d), before) * b.rhs_scale);
        }
        double after = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            after += v[i] * v[i];
        }
        after = std::sqrt(after);

        if (after <= kDependentRatio * std::max(before, scale)) {
            if (!rhs_consistent(v[k], rhs_scale)) {
                out.unsatisfiable = true;
                out.rows.clear();
                return out;
            }
            continue;
        }
        for (double& x : v) {
            x /= after;
        }
        basis.push_back({std::move(v), scale / after, rhs_scale / after});
    }

    for (const auto& b : basis) {
        ScaledEquation se;
        se.scale = b.scale;
        se.rhs_scale = b.rhs_scale;
        se.eq.rhs = b.v[k];
        for (std::size_t i = 0; i < k; ++i) {
            if (std::abs(b.v[i]) > zero_tol * b.scale) {
                se.eq.terms.push_back({support[i], b.v[i]});
            }
        }
        out.rows.push_back(std::move(se));
    }
    return out;
}

LinsysSolution solve_system_td(const LinearSystem& sys, const PrimalGraph& primal, const TreeDecomposition& td,
                               const SolveOptions& options) {
    const auto started = Clock::now();
    require_valid(sys);
    auto violations = validate_td(sys.unknown_count, primal.edges, td);
    if (!violations.empty()) {
        throw InvalidInput("invalid tree decomposition for the primal graph: [" + violations.front().rule + "] " +
                           violations.front().detail);
    }

    LinsysSolution sol;
    auto finish = [&](SolveStatus status) {
        sol.outcome.status = status;
        sol.report.wall_time = std::chrono::duration<double>(Clock::now() - started).count();
        return sol;
    };

    const Vertex n = sys.unknown_count;
    std::vector<ScaledEquation> eqs;
    std::vector<char> alive;
    std::vector<std::vector<int>> occurrences(n);
    auto insert = [&](ScaledEquation se) {
        if (se.eq.terms.empty()) {
            return rhs_consistent(se.eq.rhs, se.rhs_scale);
        }
        int id = static_cast<int>(eqs.size());
        for (const auto& t : se.eq.terms) {
            occurrences[t.var].push_back(id);
        }
        eqs.push_back(std::move(se));
        alive.push_back(1);
        return true;
    };
    for (const auto& raw : sys.equations) {
        ScaledEquation se = with_scale(raw);
        if (se.eq.terms.empty() && se.eq.rhs != 0.0) {
            return finish(SolveStatus::Unsatisfiable);
        }
        insert(std::move(se));
    }

    struct Pivot {
        Vertex var;
        double coef;
        Equation eq;
    };
    std::vector<Pivot> pivots;
    pivots.reserve(n);
    bool free_unknown = false;

    EliminationSchedule sched = schedule(td, {});
    std::size_t steps = 0;
    for (const auto& step : sched.steps) {
        if (step.kind != ScheduleStep::Kind::EliminateVertex) {
            continue;
        }
        if (++steps % 256 == 0) {
            check_deadline(options.deadline);
        }
        const Vertex x = step.vertex;
        std::vector<ScaledEquation> gathered;
        for (int id : occurrences[x]) {
            if (alive[id]) {
                alive[id] = 0;
                gathered.push_back(std::move(eqs[id]));
            }
        }
        occurrences[x].clear();
        occurrences[x].shrink_to_fit();
        if (gathered.empty()) {
            free_unknown = true;
            continue;
        }

        if (options.audit) {
            const auto& bag = td.bag(step.bag);
            for (const auto& g : gathered) {
                for (const auto& t : g.eq.terms) {
                    if (!std::binary_search(bag.begin(), bag.end(), t.var)) {
                        ++sol.report.audit_violations;
                    }
                }
            }
        }

        std::size_t support = 0;
        for (const auto& g : gathered) {
            support = std::max(support, g.eq.terms.size());
        }
        sol.report.work_counter += gathered.size() * support * support;

        ReducedRows reduced = gram_schmidt_reduce(gathered, options.zero_tol);
        if (reduced.unsatisfiable) {
            return finish(SolveStatus::Unsatisfiable);
        }

        int best = -1;
        double best_abs = 0.0;
        for (std::size_t i = 0; i < reduced.rows.size(); ++i) {
            double c = std::abs(coef_of(reduced.rows[i].eq, x));
            if (c > options.zero_tol * reduced.rows[i].scale && c > best_abs) {
                best = static_cast<int>(i);
                best_abs = c;
            }
        }
        if (best < 0) {
            free_unknown = true;
        }

        const ScaledEquation* pivot = best < 0 ? nullptr : &reduced.rows[best];
        const double pivot_coef = pivot ? coef_of(pivot->eq, x) : 0.0;
        for (std::size_t i = 0; i < reduced.rows.size(); ++i) {
            if (static_cast<int>(i) == best) {
                continue;
            }
            ScaledEquation& row = reduced.rows[i];
            double a = coef_of(row.eq, x);
            ScaledEquation next;
            next.scale = row.scale;
            next.rhs_scale = row.rhs_scale;
            next.eq.rhs = row.eq.rhs;
            if (pivot != nullptr && a != 0.0) {
                double f = a / pivot_coef;
                next.scale = std::max(row.scale, std::abs(f) * pivot->scale);
                next.rhs_scale = std::max(row.rhs_scale, std::abs(f) * pivot->rhs_scale);
                next.eq.rhs -= f * pivot->eq.rhs;
                auto p = pivot->eq.terms.begin();
                auto q = row.eq.terms.begin();
                while (p != pivot->eq.terms.end() || q != row.eq.terms.end()) {
                    Term t;
                    if (q == row.eq.terms.end() || (p != pivot->eq.terms.end() && p->var < q->var)) {
                        t = {p->var, -f * p->coef};
                        ++p;
                    } else if (p == pivot->eq.terms.end() || q->var < p->var) {
                        t = *q;
                        ++q;
                    } else {
                        t = {q->var, q->coef - f * p->coef};
                        ++p;
                        ++q;
                    }
                    if (t.var != x && std::abs(t.coef) > options.zero_tol * next.scale) {
                        next.eq.terms.push_back(t);
                    }
                }
            } else {
                for (const auto& t : row.eq.terms) {
                    if (t.var != x) {
                        next.eq.terms.push_back(t);
                    }
                }
            }
            if (!insert(std::move(next))) {
                return finish(SolveStatus::Unsatisfiable);
            }
        }
        if (pivot != nullptr) {
            Pivot pv{x, pivot_coef, {}};
            pv.eq.rhs = pivot->eq.rhs;
            for (const auto& t : pivot->eq.terms) {
                if (t.var != x) {
                    pv.eq.terms.push_back(t);
                }
            }
            pivots.push_back(std::move(pv));
        }
        ++sol.report.eliminated;
    }

    if (free_unknown) {
        return finish(SolveStatus::Underdetermined);
    }
    std::vector<double> value(n, 0.0);
    for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
        double r = it->eq.rhs;
        for (const auto& t : it->eq.terms) {
            r -= t.coef * value[t.var];
        }
        value[it->var] = r / it->coef;
    }
    sol.outcome.assignment = std::move(value);
    sol.report.values = sol.outcome.assignment;
    return finish(SolveStatus::Unique);
}

std::vector<double> solve_pinned_homogeneous(const LinearSystem& sys, const PrimalGraph& primal,
                                             const TreeDecomposition& td, Vertex pin, const SolveOptions& options) {
    if (pin < 0 || pin >= sys.unknown_count) {
        throw InvalidInput("pin " + std::to_string(pin) + " is not an unknown");
    }
    LinearSystem augmented = sys;
    augmented.equations.push_back({{{pin, 1.0}}, 1.0});
    LinsysSolution sol = solve_system_td(augmented, primal, td, options);
    if (sol.outcome.status != SolveStatus::Unique) {
        throw NumericalError("nullspace dimension != 1 at pin " + std::to_string(pin));
    }
    return std::move(sol.outcome.assignment);
}

double max_residual(const LinearSystem& sys, const std::vector<double>& x) {
    double worst = 0.0;
    for (const auto& eq : sys.equations) {
        double lhs = 0.0;
        for (const auto& t : eq.terms) {
            lhs += t.coef * x[t.var];
        }
        worst = std::max(worst, std::abs(lhs - eq.rhs));
    }
    return worst;
}

}  // namespace twmc
