#include "twmc/discounted.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "twmc/hitting.hpp"

namespace twmc {

namespace {

constexpr double kCancelTol = 1e-12;
constexpr double kDivergentTol = 1e-12;
constexpr double kMinLambda = 1e-6;

}  // namespace

void validate_spec(const DiscountedSpec& spec) {
    if (!(spec.lambda > 0.0 && spec.lambda < 1.0)) {
        throw InvalidInput("discount factor must lie strictly between 0 and 1");
    }
    if (spec.lambda < kMinLambda) {
        throw InvalidInput("discount factor below 1e-6 is not supported (elimination divides by it)");
    }
}

OneHatChain add_one_hat(const MarkovChain& mc, const DiscountedSpec& spec, const TreeDecomposition* td) {
    const Vertex n = mc.vertex_count();
    std::vector<Edge> edges = mc.edges();
    edges.push_back({n, n, 1.0, 1.0 - spec.lambda});
    OneHatChain out;
    out.chain = MarkovChain(n + 1, edges, mc.strict_mode());
    out.one_hat = n;
    if (td != nullptr) {
        out.td = add_to_all_bags(*td, n);
    }
    return out;
}

MergedEdge merge_parallel_edges(Transition e1, Transition e2, double lambda) {
    MergedEdge m;
    if (e2.weight == 0.0) {
        m.edge = e1;
        return m;
    }
    if (e1.weight == 0.0) {
        m.edge = e2;
        return m;
    }
    const double sum = e1.weight + e2.weight;
    const double mass = e1.weight * e1.reward + e2.weight * e2.reward;
    if (std::abs(sum) <= kCancelTol) {
        m.cancelled = true;
        m.one_hat_weight = mass / lambda;
        return m;
    }
    m.edge = {sum, mass / sum};
    return m;
}

void add_edge_disc(WorkingGraph& g, Vertex u, Vertex v, Transition t, Vertex one_hat, double lambda) {
    if (t.weight == 0.0) {
        return;
    }
    ++g.work;
    if (!g.has_edge(u, v)) {
        g.set_edge(u, v, t);
        return;
    }
    MergedEdge m = merge_parallel_edges(g.edge(u, v), t, lambda);
    if (!m.cancelled) {
        g.set_edge(u, v, m.edge);
        return;
    }
    g.remove_edge(u, v);
    if (v == one_hat) {
        if (m.one_hat_weight != 0.0) {
            g.set_edge(u, one_hat, {m.one_hat_weight, 0.0});
        }
        return;
    }
    add_edge_disc(g, u, one_hat, {m.one_hat_weight, 0.0}, one_hat, lambda);
}

void resolve_self_loop_disc(WorkingGraph& g, Vertex u, Vertex one_hat, double lambda) {
    if (!g.has_edge(u, u)) {
        return;
    }
    const Transition loop = g.edge(u, u);
    const double f = 1.0 - lambda * loop.weight;
    if (std::abs(f) < kDivergentTol) {
        throw NumericalError("divergent self-loop at vertex " + std::to_string(u));
    }
    g.remove_edge(u, u);
    auto row = g.out(u);
    for (auto& [v, t] : row) {
        t.weight /= f;
    }
    g.replace_row(u, row);
    g.work += row.size();
    const double constant = loop.weight * loop.reward / f;
    if (constant != 0.0) {
        add_edge_disc(g, u, one_hat, {constant / lambda, 0.0}, one_hat, lambda);
    }
}

DiscountedRow eliminate_vertex_disc(WorkingGraph& g, Vertex u, Vertex one_hat, double lambda) {
    resolve_self_loop_disc(g, u, one_hat, lambda);
    DiscountedRow row;
    row.vertex = u;
    row.successors.assign(g.out(u).begin(), g.out(u).end());
    const std::vector<Vertex> preds(g.in(u).begin(), g.in(u).end());
    for (Vertex p : preds) {
        const Transition in = g.edge(p, u);
        g.remove_edge(p, u);
        const double constant = in.weight * in.reward;
        if (constant != 0.0) {
            add_edge_disc(g, p, one_hat, {constant / lambda, 0.0}, one_hat, lambda);
        }
        for (const auto& [v, t] : row.successors) {
            add_edge_disc(g, p, v, {in.weight * t.weight * lambda, t.reward}, one_hat, lambda);
        }
    }
    g.remove_vertex(u);
    return row;
}

namespace {

DiscountedSolution run(const MarkovChain& mc, const DiscountedSpec& spec, const TreeDecomposition* td,
                       const SolveOptions& options) {
    const auto started = Clock::now();
    detail::require_strict(mc);
    validate_spec(spec);
    if (td != nullptr) {
        detail::require_valid_td(mc.adjacency(), *td);
    }
    const double lambda = spec.lambda;
    OneHatChain gadget = add_one_hat(mc, spec, td);
    const Vertex one_hat = gadget.one_hat;
    WorkingGraph g(gadget.chain);

    DiscountedSolution sol;
    std::vector<DiscountedRow> rows;
    rows.reserve(mc.vertex_count());
    std::size_t steps = 0;
    auto eliminate = [&](Vertex u) {
        if (++steps % 1024 == 0) {
            check_deadline(options.deadline);
        }
        rows.push_back(eliminate_vertex_disc(g, u, one_hat, lambda));
    };

    if (td != nullptr) {
        const TreeDecomposition& local = *gadget.td;
        const Vertex pinned[] = {one_hat};
        EliminationSchedule sched = schedule(local, pinned);
        std::vector<char> gone(gadget.chain.vertex_count(), 0);
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
    } else {
        for (Vertex u = 0; u < mc.vertex_count(); ++u) {
            eliminate(u);
        }
    }

    std::vector<double> value(gadget.chain.vertex_count(), 0.0);
    value[one_hat] = 1.0;
    for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
        double y = 0.0;
        for (const auto& [v, t] : it->successors) {
            y += t.weight * (t.reward + lambda * value[v]);
        }
        value[it->vertex] = y;
    }
    value.pop_back();
    sol.result.value = value;
    sol.report.values = std::move(value);
    sol.report.work_counter = g.work;
    sol.report.eliminated = rows.size();
    sol.report.wall_time = std::chrono::duration<double>(Clock::now() - started).count();
    return sol;
}

}  // namespace

DiscountedSolution solve_discounted_td(const MarkovChain& mc, const DiscountedSpec& spec,
                                       const TreeDecomposition& td, const SolveOptions& options) {
    return run(mc, spec, &td, options);
}

DiscountedSolution solve_discounted_simple(const MarkovChain& mc, const DiscountedSpec& spec,
                                           const SolveOptions& options) {
    return run(mc, spec, nullptr, options);
}

LinearSystem discounted_system(const MarkovChain& mc, const DiscountedSpec& spec) {
    const Vertex n = mc.vertex_count();
    LinearSystem sys;
    sys.unknown_count = n;
    sys.equations.reserve(n);
    for (Vertex u = 0; u < n; ++u) {
        Equation eq;
        eq.terms.push_back({u, 1.0});
        for (const auto& s : mc.successors(u)) {
            eq.rhs += s.weight * s.reward;
            if (s.dst == u) {
                eq.terms[0].coef -= spec.lambda * s.weight;
            } else {
                eq.terms.push_back({s.dst, -spec.lambda * s.weight});
            }
        }
        sys.equations.push_back(std::move(eq));
    }
    return sys;
}

}  // namespace twmc
