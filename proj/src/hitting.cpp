#include "twmc/hitting.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace twmc {

namespace {

// Loops this close to 1 cannot be divided out reliably.
constexpr double kSingularLoop = 1e-12;

}  // namespace

MergedTargets merge_targets(const MarkovChain& mc, const TargetSet& targets, const TreeDecomposition* td) {
    MergedTargets out;
    if (targets.size() == 1) {
        out.chain = mc;
        out.target = targets.vertices().front();
        if (td != nullptr) {
            out.td = *td;
        }
        return out;
    }
    const Vertex n = mc.vertex_count();
    std::vector<Edge> edges;
    edges.reserve(mc.edge_count() + targets.size() + 1);
    for (Vertex u = 0; u < n; ++u) {
        if (targets.contains(u)) {
            edges.push_back({u, n, 1.0, 0.0});
            continue;
        }
        for (const auto& s : mc.successors(u)) {
            edges.push_back({u, s.dst, s.weight, s.reward});
        }
    }
    edges.push_back({n, n, 1.0, 0.0});
    out.chain = MarkovChain(n + 1, edges, mc.strict_mode());
    out.target = n;
    if (td != nullptr) {
        out.td = add_to_all_bags(*td, n);
    }
    return out;
}

EliminatedRow eliminate_vertex_hit(WorkingGraph& g, Vertex u, bool input_absorbing) {
    EliminatedRow row;
    row.vertex = u;
    if (input_absorbing) {
        row.absorbing = true;
        g.remove_vertex(u);
        return row;
    }

    if (g.has_edge(u, u)) {
        double loop = g.edge(u, u).weight;
        if (std::abs(1.0 - loop) < kSingularLoop) {
            throw NumericalError("near-singular self-loop at vertex " + std::to_string(u));
        }
        double factor = 1.0 / (1.0 - loop);
        g.remove_edge(u, u);
        auto rescaled = g.out(u);
        for (auto& [v, t] : rescaled) {
            t.weight *= factor;
        }
        g.replace_row(u, rescaled);
        g.work += rescaled.size();
    }

    row.successors.reserve(g.out(u).size());
    for (const auto& [v, t] : g.out(u)) {
        row.successors.emplace_back(v, t.weight);
    }
    const std::vector<Vertex> preds(g.in(u).begin(), g.in(u).end());
    for (Vertex p : preds) {
        double into_u = g.edge(p, u).weight;
        g.remove_edge(p, u);
        for (const auto& [v, w] : row.successors) {
            g.upsert(p, v).weight += into_u * w;
        }
        g.work += row.successors.size() + 1;
    }
    g.remove_vertex(u);
    return row;
}

namespace detail {

void require_strict(const MarkovChain& mc) {
    auto violations = validate_mc(mc, true);
    if (!violations.empty()) {
        throw InvalidInput("not a Markov chain: [" + violations.front().rule + "] " + violations.front().detail);
    }
}

void require_valid_td(const Adjacency& adj, const TreeDecomposition& td) {
    auto edges = skeleton(adj);
    auto violations = validate_td(adj.vertex_count(), edges, td);
    if (violations.empty()) {
        return;
    }
    std::string message = "invalid tree decomposition:";
    for (std::size_t i = 0; i < violations.size() && i < 3; ++i) {
        message += " [" + violations[i].rule + "] " + violations[i].detail + ";";
    }
    throw InvalidInput(message);
}

HitSolution solve_single_target(const MarkovChain& chain, Vertex target, const TreeDecomposition* td,
                                const SolveOptions& options) {
    const auto started = Clock::now();
    const Vertex n = chain.vertex_count();
    Restriction restricted = remove_non_coreachable(chain, TargetSet({target}, n));
    const MarkovChain& c = restricted.chain;
    const Vertex t = restricted.to_restricted[target];

    WorkingGraph g(c);
    g.replace_row(t, {});
    std::vector<char> trap(c.vertex_count(), 0);
    for (Vertex v = 0; v < c.vertex_count(); ++v) {
        auto row = c.successors(v);
        trap[v] = row.size() == 1 && row[0].dst == v && row[0].weight == 1.0;
    }

    HitSolution sol;
    std::vector<EliminatedRow> rows;
    rows.reserve(c.vertex_count());
    std::size_t steps = 0;
    auto eliminate = [&](Vertex u) {
        if (++steps % 1024 == 0) {
            check_deadline(options.deadline);
        }
        rows.push_back(eliminate_vertex_hit(g, u, trap[u] != 0));
    };

    if (td != nullptr) {
        TreeDecomposition local = remap_vertices(*td, restricted.to_restricted);
        const Vertex pinned[] = {t};
        EliminationSchedule sched = schedule(local, pinned);
        std::vector<char> gone(c.vertex_count(), 0);
        for (const auto& step : sched.steps) {
            if (step.kind == ScheduleStep::Kind::EliminateVertex) {
                if (options.audit && !neighbourhood_inside(g, step.vertex, local.bag(step.bag))) {
                    ++sol.report.audit_violations;
                }
                eliminate(step.vertex);
                gone[step.vertex] = 1;
            } else if (options.audit) {
                const auto& parent_bag = local.bag(sched.parent[step.bag]);
                for (Vertex v : local.bag(step.bag)) {
                    if (!gone[v] && !std::binary_search(parent_bag.begin(), parent_bag.end(), v)) {
                        ++sol.report.audit_violations;
                        break;
                    }
                }
            }
        }
        if (rows.size() + 1 != static_cast<std::size_t>(c.vertex_count())) {
            throw InvalidInput("tree decomposition does not cover every vertex");
        }
    } else {
        for (Vertex u = 0; u < c.vertex_count(); ++u) {
            if (u != t) {
                eliminate(u);
            }
        }
    }

    std::vector<double> local_value(c.vertex_count(), 0.0);
    local_value[t] = 1.0;
    for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
        double value = 0.0;
        for (const auto& [v, w] : it->successors) {
            value += w * local_value[v];
        }
        local_value[it->vertex] = it->absorbing ? 0.0 : value;
    }

    sol.result.prob.assign(n, 0.0);
    for (Vertex v = 0; v < c.vertex_count(); ++v) {
        sol.result.prob[restricted.to_original[v]] = local_value[v];
    }
    sol.result.removed_zero = restricted.removed;
    sol.report.values = sol.result.prob;
    sol.report.work_counter = g.work;
    sol.report.eliminated = rows.size();
    sol.report.wall_time = std::chrono::duration<double>(Clock::now() - started).count();
    return sol;
}

}  // namespace detail

namespace {

HitSolution finish(HitSolution sol, Vertex n) {
    sol.result.prob.resize(n);
    sol.report.values.resize(n);
    std::erase_if(sol.result.removed_zero, [n](Vertex v) { return v >= n; });
    return sol;
}

}  // namespace

HitSolution solve_hitting_td(const MarkovChain& mc, const TargetSet& targets, const TreeDecomposition& td,
                             const SolveOptions& options) {
    detail::require_strict(mc);
    detail::require_valid_td(mc.adjacency(), td);
    MergedTargets merged = merge_targets(mc, targets, &td);
    return finish(detail::solve_single_target(merged.chain, merged.target, &*merged.td, options), mc.vertex_count());
}

HitSolution solve_hitting_simple(const MarkovChain& mc, const TargetSet& targets, const SolveOptions& options) {
    detail::require_strict(mc);
    MergedTargets merged = merge_targets(mc, targets, nullptr);
    return finish(detail::solve_single_target(merged.chain, merged.target, nullptr, options), mc.vertex_count());
}

LinearSystem hitting_system(const MarkovChain& mc, const TargetSet& targets) {
    const Vertex n = mc.vertex_count();
    auto reach = coreachable(mc.adjacency(), targets.vertices());
    LinearSystem sys;
    sys.unknown_count = n;
    sys.equations.reserve(n);
    for (Vertex u = 0; u < n; ++u) {
        Equation eq;
        eq.terms.push_back({u, 1.0});
        if (targets.contains(u)) {
            eq.rhs = 1.0;
        } else if (reach[u]) {
            for (const auto& s : mc.successors(u)) {
                if (s.dst == u) {
                    eq.terms[0].coef -= s.weight;
                } else {
                    eq.terms.push_back({s.dst, -s.weight});
                }
            }
        }
        sys.equations.push_back(std::move(eq));
    }
    return sys;
}

}  // namespace twmc
