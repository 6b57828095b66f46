#include "twmc/mean_payoff.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "twmc/hitting.hpp"
#include "twmc/linsys.hpp"

namespace twmc {

SccDecomposition scc_decompose(const Adjacency& adj) {
    const Vertex n = adj.vertex_count();
    std::vector<int> index(n, -1);
    std::vector<int> low(n, 0);
    std::vector<char> on_stack(n, 0);
    std::vector<Vertex> stack;
    std::vector<std::pair<Vertex, std::size_t>> frames;
    std::vector<int> raw(n, -1);
    std::vector<std::vector<Vertex>> groups;
    int counter = 0;

    for (Vertex s = 0; s < n; ++s) {
        if (index[s] >= 0) {
            continue;
        }
        index[s] = low[s] = counter++;
        stack.push_back(s);
        on_stack[s] = 1;
        frames.emplace_back(s, 0);
        while (!frames.empty()) {
            auto& [v, i] = frames.back();
            auto succ = adj.successors(v);
            if (i < succ.size()) {
                Vertex w = succ[i++].dst;
                if (index[w] < 0) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    frames.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            const Vertex done = v;
            frames.pop_back();
            if (low[done] == index[done]) {
                std::vector<Vertex> group;
                Vertex w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    raw[w] = static_cast<int>(groups.size());
                    group.push_back(w);
                } while (w != done);
                std::sort(group.begin(), group.end());
                groups.push_back(std::move(group));
            }
            if (!frames.empty()) {
                Vertex parent = frames.back().first;
                low[parent] = std::min(low[parent], low[done]);
            }
        }
    }

    std::vector<int> order(groups.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return groups[a].front() < groups[b].front(); });
    std::vector<int> rank(groups.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        rank[order[i]] = static_cast<int>(i);
    }

    SccDecomposition out;
    out.component.resize(n);
    for (Vertex v = 0; v < n; ++v) {
        out.component[v] = rank[raw[v]];
    }
    out.members.resize(groups.size());
    out.representative.resize(groups.size());
    out.is_bottom.assign(groups.size(), 1);
    for (std::size_t i = 0; i < order.size(); ++i) {
        out.members[i] = std::move(groups[order[i]]);
        out.representative[i] = out.members[i].front();
    }
    for (Vertex u = 0; u < n; ++u) {
        for (const auto& s : adj.successors(u)) {
            if (out.component[s.dst] != out.component[u]) {
                out.is_bottom[out.component[u]] = 0;
                break;
            }
        }
    }
    return out;
}

SccDecomposition scc_decompose(const MarkovChain& mc) { return scc_decompose(mc.adjacency()); }

LimitingDistribution limiting_distribution(const MarkovChain& bscc, const TreeDecomposition* td,
                                           const SolveOptions& options) {
    const Vertex n = bscc.vertex_count();
    if (n == 0) {
        throw InvalidInput("empty component");
    }
    LinearSystem sys;
    sys.unknown_count = n;
    sys.equations.resize(n);
    for (Vertex u = 0; u < n; ++u) {
        sys.equations[u].terms.push_back({u, 1.0});
    }
    for (Vertex p = 0; p < n; ++p) {
        for (const auto& s : bscc.successors(p)) {
            if (s.dst == p) {
                sys.equations[p].terms[0].coef -= s.weight;
            } else {
                sys.equations[s.dst].terms.push_back({p, -s.weight});
            }
        }
    }

    PrimalGraph primal = build_primal(sys);
    TreeDecomposition own;
    const TreeDecomposition* use = td;
    if (use == nullptr || !validate_td(n, primal.edges, *use).empty()) {
        own = heuristic_decompose(n, primal.edges, Heuristic::MinDegree);
        use = &own;
    }
    std::vector<double> x = solve_pinned_homogeneous(sys, primal, *use, 0, options);
    const double total = std::accumulate(x.begin(), x.end(), 0.0);
    if (!(total > 0.0)) {
        throw NumericalError("stationary solution does not normalize");
    }
    LimitingDistribution out;
    out.vertex_weight.resize(n);
    for (Vertex v = 0; v < n; ++v) {
        out.vertex_weight[v] = x[v] / total;
    }
    for (Vertex u = 0; u < n; ++u) {
        for (const auto& s : bscc.successors(u)) {
            out.edge_weight.push_back(out.vertex_weight[u] * s.weight);
        }
    }
    return out;
}

MeanPayoffSolution solve_mean_payoff(const MarkovChain& mc, const TreeDecomposition& td,
                                     const SolveOptions& options) {
    const auto started = Clock::now();
    detail::require_strict(mc);
    detail::require_valid_td(mc.adjacency(), td);
    const Vertex n = mc.vertex_count();

    MeanPayoffSolution sol;
    MeanPayoffResult& res = sol.result;
    res.scc = scc_decompose(mc);
    const SccDecomposition& scc = res.scc;
    res.component_value.assign(scc.component_count(), 0.0);
    res.value.assign(n, 0.0);

    std::vector<Vertex> local(n, kNoVertex);
    bool any_transient = false;
    for (int c = 0; c < scc.component_count(); ++c) {
        if (!scc.is_bottom[c]) {
            any_transient = true;
            continue;
        }
        check_deadline(options.deadline);
        const auto& members = scc.members[c];
        for (std::size_t i = 0; i < members.size(); ++i) {
            local[members[i]] = static_cast<Vertex>(i);
        }
        std::vector<Edge> edges;
        for (Vertex u : members) {
            for (const auto& s : mc.successors(u)) {
                edges.push_back({local[u], local[s.dst], s.weight, s.reward});
            }
        }
        MarkovChain sub(static_cast<Vertex>(members.size()), edges, true);
        TreeDecomposition sub_td = remap_vertices(td, local);
        LimitingDistribution dist = limiting_distribution(sub, &sub_td, options);
        double mp = 0.0;
        for (std::size_t e = 0; e < edges.size(); ++e) {
            mp += edges[e].reward * dist.edge_weight[e];
        }
        res.component_value[c] = mp;
        for (Vertex u : members) {
            res.value[u] = mp;
            local[u] = kNoVertex;
        }
        sol.report.work_counter += edges.size();
    }

    if (any_transient) {
        const Vertex sink = n;
        std::vector<Edge> edges;
        edges.reserve(mc.edge_count() + 1);
        for (Vertex u = 0; u < n; ++u) {
            int c = scc.component[u];
            if (scc.is_bottom[c] && scc.representative[c] == u) {
                edges.push_back({u, sink, res.component_value[c], 0.0});
                continue;
            }
            for (const auto& s : mc.successors(u)) {
                edges.push_back({u, s.dst, s.weight, s.reward});
            }
        }
        edges.push_back({sink, sink, 1.0, 0.0});
        MarkovChain generalized(n + 1, edges, false);
        TreeDecomposition wide = add_to_all_bags(td, sink);
        HitSolution hit = detail::solve_single_target(generalized, sink, &wide, options);
        for (Vertex u = 0; u < n; ++u) {
            if (!scc.is_bottom[scc.component[u]]) {
                res.value[u] = hit.result.prob[u];
            }
        }
        sol.report.work_counter += hit.report.work_counter;
        sol.report.eliminated += hit.report.eliminated;
        sol.report.audit_violations += hit.report.audit_violations;
    }

    sol.report.values = res.value;
    sol.report.wall_time = std::chrono::duration<double>(Clock::now() - started).count();
    return sol;
}

}  // namespace twmc
