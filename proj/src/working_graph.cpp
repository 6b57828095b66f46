#include "twmc/working_graph.hpp"

#include <algorithm>

namespace twmc {

WorkingGraph::WorkingGraph(const MarkovChain& mc)
    : out_(mc.vertex_count()), in_(mc.vertex_count()), alive_(mc.vertex_count(), 1) {
    for (Vertex u = 0; u < mc.vertex_count(); ++u) {
        for (const auto& s : mc.successors(u)) {
            out_[u].emplace_hint(out_[u].end(), s.dst, Transition{s.weight, s.reward});
            if (s.dst != u) {
                in_[s.dst].insert(u);
            }
        }
    }
}

Transition WorkingGraph::edge(Vertex u, Vertex v) const {
    auto it = out_[u].find(v);
    return it == out_[u].end() ? Transition{} : it->second;
}

void WorkingGraph::set_edge(Vertex u, Vertex v, Transition t) {
    out_[u][v] = t;
    if (u != v) {
        in_[v].insert(u);
    }
}

Transition& WorkingGraph::upsert(Vertex u, Vertex v) {
    auto [it, inserted] = out_[u].try_emplace(v);
    if (inserted && u != v) {
        in_[v].insert(u);
    }
    return it->second;
}

void WorkingGraph::remove_edge(Vertex u, Vertex v) {
    out_[u].erase(v);
    if (u != v) {
        in_[v].erase(u);
    }
}

void WorkingGraph::replace_row(Vertex u, const std::map<Vertex, Transition>& row) {
    for (const auto& [v, t] : out_[u]) {
        if (v != u) {
            in_[v].erase(u);
        }
    }
    out_[u] = row;
    for (const auto& [v, t] : out_[u]) {
        if (v != u) {
            in_[v].insert(u);
        }
    }
}

void WorkingGraph::remove_vertex(Vertex u) {
    for (const auto& [v, t] : out_[u]) {
        if (v != u) {
            in_[v].erase(u);
        }
    }
    for (Vertex p : in_[u]) {
        out_[p].erase(u);
    }
    out_[u].clear();
    in_[u].clear();
    alive_[u] = 0;
}

bool neighbourhood_inside(const WorkingGraph& g, Vertex u, const std::vector<Vertex>& bag) {
    auto inside = [&](Vertex v) { return std::binary_search(bag.begin(), bag.end(), v); };
    for (const auto& [v, t] : g.out(u)) {
        if (!inside(v)) {
            return false;
        }
    }
    return std::all_of(g.in(u).begin(), g.in(u).end(), inside);
}

}  // namespace twmc
