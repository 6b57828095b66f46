#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "twmc/model.hpp"

namespace twmc {

/// Weight/reward pair on a working edge. Weights may be any real once
/// elimination has started.
struct Transition {
    double weight = 0.0;
    double reward = 0.0;
};

/// Mutable copy of a chain used during elimination. Successor maps are
/// ordered by destination, so sums over them always run in ascending id.
class WorkingGraph {
public:
    WorkingGraph() = default;
    explicit WorkingGraph(const MarkovChain& mc);

    Vertex capacity() const { return static_cast<Vertex>(out_.size()); }
    bool alive(Vertex v) const { return alive_[v] != 0; }

    const std::map<Vertex, Transition>& out(Vertex u) const { return out_[u]; }
    /// Predecessors other than u itself.
    const std::set<Vertex>& in(Vertex u) const { return in_[u]; }

    bool has_edge(Vertex u, Vertex v) const { return out_[u].contains(v); }
    Transition edge(Vertex u, Vertex v) const;
    void set_edge(Vertex u, Vertex v, Transition t);
    /// The edge (u, v), created with zero weight and reward if absent.
    Transition& upsert(Vertex u, Vertex v);
    void remove_edge(Vertex u, Vertex v);
    /// Replaces u's whole successor row.
    void replace_row(Vertex u, const std::map<Vertex, Transition>& row);
    /// Deletes u together with all incident edges.
    void remove_vertex(Vertex u);

    /// Edge updates performed so far; feeds SolverReport::work_counter.
    std::uint64_t work = 0;

private:
    std::vector<std::map<Vertex, Transition>> out_;
    std::vector<std::set<Vertex>> in_;
    std::vector<char> alive_;
};

/// True when every current neighbour of u lies in `bag` (sorted).
bool neighbourhood_inside(const WorkingGraph& graph, Vertex u, const std::vector<Vertex>& bag);

}  // namespace twmc
