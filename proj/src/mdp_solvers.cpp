#include "twmc/mdp_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "twmc/hitting.hpp"

namespace twmc {

namespace {

constexpr double kImprovement = 1e-10;

// One-step value of moving from v to successor s.
double lookahead(const Objective& objective, const Successor& s, const std::vector<double>& val) {
    if (const auto* d = std::get_if<DiscountedObjective>(&objective)) {
        return s.reward + d->spec.lambda * val[s.dst];
    }
    return val[s.dst];
}

Vertex greedy_choice(const MarkovDecisionProcess& mdp, Vertex v, Vertex current, const Objective& objective,
                     const std::vector<double>& val) {
    auto succ = mdp.successors(v);
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& s : succ) {
        best = std::max(best, lookahead(objective, s, val));
    }
    if (current != kNoVertex) {
        const Successor* cur = mdp.find(v, current);
        if (cur != nullptr && best <= lookahead(objective, *cur, val) + kImprovement) {
            return current;
        }
    }
    for (const auto& s : succ) {
        if (lookahead(objective, s, val) >= best - kImprovement) {
            return s.dst;
        }
    }
    return succ.front().dst;
}

void require_valid_mdp(const MarkovDecisionProcess& mdp) {
    auto violations = validate_mdp(mdp);
    if (!violations.empty()) {
        throw InvalidInput("invalid MDP: [" + violations.front().rule + "] " + violations.front().detail);
    }
}

}  // namespace

Strategy initial_strategy(const MarkovDecisionProcess& mdp) {
    Strategy sigma;
    sigma.choice.assign(mdp.vertex_count(), kNoVertex);
    for (Vertex v = 0; v < mdp.vertex_count(); ++v) {
        if (mdp.owner(v) == Owner::Player1 && !mdp.successors(v).empty()) {
            sigma.choice[v] = mdp.successors(v).front().dst;
        }
    }
    return sigma;
}

std::vector<double> evaluate_strategy(const MarkovDecisionProcess& mdp, const Strategy& sigma,
                                      const Objective& objective, const TreeDecomposition* td, Evaluator evaluator,
                                      const SolveOptions& options, std::uint64_t* work) {
    MarkovChain mc = induce_mc(mdp, sigma);
    const bool use_td = evaluator == Evaluator::TreeDecomposition;
    if (use_td && td == nullptr) {
        throw InvalidInput("tree-decomposition evaluator needs a decomposition");
    }
    SolverReport report;
    if (const auto* h = std::get_if<HittingObjective>(&objective)) {
        auto sol = use_td ? solve_hitting_td(mc, h->targets, *td, options)
                          : solve_hitting_simple(mc, h->targets, options);
        report = std::move(sol.report);
    } else {
        const auto& d = std::get<DiscountedObjective>(objective);
        auto sol = use_td ? solve_discounted_td(mc, d.spec, *td, options)
                          : solve_discounted_simple(mc, d.spec, options);
        report = std::move(sol.report);
    }
    if (work != nullptr) {
        *work += report.work_counter;
    }
    return std::move(report.values);
}

SolverReport strategy_iteration(const MarkovDecisionProcess& mdp, const Objective& objective,
                                const TreeDecomposition* td, const SiOptions& options) {
    const auto started = Clock::now();
    require_valid_mdp(mdp);
    const Vertex n = mdp.vertex_count();
    if (options.evaluator == Evaluator::TreeDecomposition) {
        if (td == nullptr) {
            throw InvalidInput("tree-decomposition evaluator needs a decomposition");
        }
        detail::require_valid_td(mdp.adjacency(), *td);
    }

    // Vertices whose choice can matter.
    std::vector<char> free(n, 0);
    std::vector<bool> reach(n, true);
    if (const auto* h = std::get_if<HittingObjective>(&objective)) {
        reach = coreachable(mdp.adjacency(), h->targets.vertices());
        for (Vertex v : h->targets.vertices()) {
            reach[v] = false;
        }
    }
    for (Vertex v = 0; v < n; ++v) {
        free[v] = mdp.owner(v) == Owner::Player1 && reach[v];
    }

    SolverReport report;
    Strategy sigma = initial_strategy(mdp);
    const std::size_t guard = 10 * static_cast<std::size_t>(std::max<Vertex>(n, 1));
    while (true) {
        if (report.kappa >= guard) {
            throw NumericalError("strategy iteration did not converge within 10|V| rounds");
        }
        check_deadline(options.solve.deadline);
        std::vector<double> val =
            evaluate_strategy(mdp, sigma, objective, td, options.evaluator, options.solve, &report.work_counter);
        ++report.kappa;
        if (options.trace) {
            report.value_trace.push_back(val);
            report.strategy_trace.push_back(sigma);
        }
        Strategy next = sigma;
        for (Vertex v = 0; v < n; ++v) {
            if (free[v]) {
                next.choice[v] = greedy_choice(mdp, v, sigma.choice[v], objective, val);
            }
        }
        report.values = std::move(val);
        if (next == sigma) {
            break;
        }
        sigma = std::move(next);
    }
    report.strategy = std::move(sigma);
    report.wall_time = std::chrono::duration<double>(Clock::now() - started).count();
    return report;
}

SolverReport value_iteration(const MarkovDecisionProcess& mdp, const Objective& objective,
                             const ViOptions& options) {
    const auto started = Clock::now();
    require_valid_mdp(mdp);
    if (!(options.epsilon > 0.0)) {
        throw InvalidInput("epsilon must be positive");
    }
    const Vertex n = mdp.vertex_count();
    const auto* hitting = std::get_if<HittingObjective>(&objective);
    if (const auto* d = std::get_if<DiscountedObjective>(&objective)) {
        validate_spec(d->spec);
    }
    std::vector<char> pinned(n, 0);
    std::vector<double> val(n, 0.0);
    if (hitting != nullptr) {
        for (Vertex t : hitting->targets.vertices()) {
            pinned[t] = 1;
            val[t] = 1.0;
        }
    }

    SolverReport report;
    report.converged = false;
    std::vector<double> next(n, 0.0);
    while (report.kappa < options.max_iters) {
        if (report.kappa % 64 == 0) {
            check_deadline(options.deadline);
        }
        double delta = 0.0;
        for (Vertex v = 0; v < n; ++v) {
            if (pinned[v]) {
                next[v] = val[v];
                continue;
            }
            auto succ = mdp.successors(v);
            double x;
            if (mdp.owner(v) == Owner::Player1) {
                x = -std::numeric_limits<double>::infinity();
                for (const auto& s : succ) {
                    x = std::max(x, lookahead(objective, s, val));
                }
            } else {
                x = 0.0;
                for (const auto& s : succ) {
                    x += s.weight * lookahead(objective, s, val);
                }
            }
            next[v] = x;
            delta = std::max(delta, std::abs(x - val[v]));
        }
        val.swap(next);
        report.work_counter += mdp.edge_count();
        ++report.kappa;
        if (delta < options.epsilon) {
            report.converged = true;
            break;
        }
    }

    Strategy sigma = initial_strategy(mdp);
    for (Vertex v = 0; v < n; ++v) {
        if (mdp.owner(v) == Owner::Player1 && !pinned[v]) {
            sigma.choice[v] = greedy_choice(mdp, v, kNoVertex, objective, val);
        }
    }
    report.values = std::move(val);
    report.strategy = std::move(sigma);
    report.wall_time = std::chrono::duration<double>(Clock::now() - started).count();
    return report;
}

}  // namespace twmc
