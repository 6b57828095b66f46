#pragma once

#include <span>
#include <utility>
#include <vector>

#include "twmc/common.hpp"

namespace twmc {

using GraphEdge = std::pair<Vertex, Vertex>;

/// Bags over graph vertices plus the tree linking them. Bags are kept sorted
/// and duplicate-free; the constructor does not validate anything else.
class TreeDecomposition {
public:
    TreeDecomposition() = default;
    TreeDecomposition(std::vector<std::vector<Vertex>> bags, std::vector<std::pair<BagId, BagId>> tree_edges);

    BagId bag_count() const { return static_cast<BagId>(bags_.size()); }
    const std::vector<Vertex>& bag(BagId b) const { return bags_[b]; }
    const std::vector<std::vector<Vertex>>& bags() const { return bags_; }
    const std::vector<std::pair<BagId, BagId>>& tree_edges() const { return tree_edges_; }
    /// Largest bag size minus one; -1 for a decomposition without bags.
    int width() const;
    /// Largest vertex id mentioned in any bag, plus one.
    Vertex vertex_bound() const;
    bool contains(BagId b, Vertex v) const;

    bool operator==(const TreeDecomposition&) const = default;

private:
    std::vector<std::vector<Vertex>> bags_;
    std::vector<std::pair<BagId, BagId>> tree_edges_;
};

/// Checks the four decomposition properties against an undirected edge set
/// over vertices 0..vertex_count-1. Self-loops in `edges` are ignored.
std::vector<Violation> validate_td(Vertex vertex_count, std::span<const GraphEdge> edges,
                                   const TreeDecomposition& td);

enum class Heuristic { MinDegree, MinFill };

/// Greedy elimination-ordering decomposition. Components are decomposed
/// separately and chained by tree edges between bags with empty intersection.
TreeDecomposition heuristic_decompose(Vertex vertex_count, std::span<const GraphEdge> edges, Heuristic heuristic);

/// Returns td with v added to every bag.
TreeDecomposition add_to_all_bags(const TreeDecomposition& td, Vertex v);

/// Renames vertices through old_to_new; vertices mapped to kNoVertex leave
/// every bag. Removing a vertex from all bags keeps a decomposition valid.
TreeDecomposition remap_vertices(const TreeDecomposition& td, std::span<const Vertex> old_to_new);

struct ScheduleStep {
    enum class Kind { RemoveBag, EliminateVertex };
    Kind kind = Kind::RemoveBag;
    BagId bag = 0;
    Vertex vertex = kNoVertex;  // only for EliminateVertex

    bool operator==(const ScheduleStep&) const = default;
};

struct EliminationSchedule {
    BagId root = 0;
    std::vector<BagId> parent;  // parent[root] == -1
    std::vector<ScheduleStep> steps;
};

/// Leaf-first elimination order. The smallest-id leaf is processed first:
/// its non-pinned vertices absent from the parent bag are eliminated in
/// ascending order, then the bag is removed. Once only the root is left its
/// non-pinned vertices are eliminated. The root is the smallest-id bag that
/// holds every pinned vertex; throws InvalidInput if there is none.
EliminationSchedule schedule(const TreeDecomposition& td, std::span<const Vertex> pinned);

/// Replays a schedule against the decomposition alone: every eliminated
/// vertex must occur in its step's bag and no bag not yet removed, every
/// removed bag must be a leaf contained in its parent, and every non-pinned
/// vertex must be eliminated exactly once.
std::vector<Violation> audit_schedule(const TreeDecomposition& td, const EliminationSchedule& sched,
                                      std::span<const Vertex> pinned);

}  // namespace twmc
