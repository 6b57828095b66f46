#include "twmc/tree_decomposition.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <queue>
#include <set>
#include <string>

namespace twmc {

namespace {

struct DisjointSets {
    std::vector<int> parent;
    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) {
            return false;
        }
        parent[a] = b;
        return true;
    }
};

std::vector<std::vector<BagId>> bags_of_vertices(const TreeDecomposition& td, Vertex bound) {
    std::vector<std::vector<BagId>> out(bound);
    for (BagId b = 0; b < td.bag_count(); ++b) {
        for (Vertex v : td.bag(b)) {
            if (v >= 0 && v < bound) {
                out[v].push_back(b);
            }
        }
    }
    return out;
}

std::vector<std::vector<BagId>> tree_adjacency(const TreeDecomposition& td) {
    std::vector<std::vector<BagId>> adj(td.bag_count());
    for (auto [a, b] : td.tree_edges()) {
        if (a >= 0 && b >= 0 && a < td.bag_count() && b < td.bag_count()) {
            adj[a].push_back(b);
            adj[b].push_back(a);
        }
    }
    return adj;
}

}  // namespace

TreeDecomposition::TreeDecomposition(std::vector<std::vector<Vertex>> bags,
                                     std::vector<std::pair<BagId, BagId>> tree_edges)
    : bags_(std::move(bags)), tree_edges_(std::move(tree_edges)) {
    for (auto& bag : bags_) {
        std::sort(bag.begin(), bag.end());
        bag.erase(std::unique(bag.begin(), bag.end()), bag.end());
    }
}

int TreeDecomposition::width() const {
    std::size_t largest = 0;
    for (const auto& bag : bags_) {
        largest = std::max(largest, bag.size());
    }
    return static_cast<int>(largest) - 1;
}

Vertex TreeDecomposition::vertex_bound() const {
    Vertex bound = 0;
    for (const auto& bag : bags_) {
        if (!bag.empty()) {
            bound = std::max(bound, bag.back() + 1);
        }
    }
    return bound;
}

bool TreeDecomposition::contains(BagId b, Vertex v) const {
    return std::binary_search(bags_[b].begin(), bags_[b].end(), v);
}

std::vector<Violation> validate_td(Vertex vertex_count, std::span<const GraphEdge> edges,
                                   const TreeDecomposition& td) {
    std::vector<Violation> out;
    const BagId bag_count = td.bag_count();

    for (BagId b = 0; b < bag_count; ++b) {
        for (Vertex v : td.bag(b)) {
            if (v < 0 || v >= vertex_count) {
                out.push_back({"vertex-range", "bag " + std::to_string(b) + " holds unknown vertex " + std::to_string(v)});
            }
        }
    }

    // Tree shape: bag_count - 1 edges, no cycle, everything connected.
    bool tree_ok = true;
    DisjointSets dsu(static_cast<std::size_t>(bag_count));
    for (auto [a, b] : td.tree_edges()) {
        if (a < 0 || b < 0 || a >= bag_count || b >= bag_count || a == b) {
            out.push_back({"tree-edge", "tree edge (" + std::to_string(a) + "," + std::to_string(b) + ") is invalid"});
            tree_ok = false;
            continue;
        }
        if (!dsu.unite(a, b)) {
            out.push_back({"tree-cycle", "tree edge (" + std::to_string(a) + "," + std::to_string(b) + ") closes a cycle"});
            tree_ok = false;
        }
    }
    for (BagId b = 1; b < bag_count; ++b) {
        if (dsu.find(b) != dsu.find(0)) {
            out.push_back({"tree-disconnected", "bag " + std::to_string(b) + " is not connected to bag 0"});
            tree_ok = false;
            break;
        }
    }

    auto holders = bags_of_vertices(td, vertex_count);
    for (Vertex v = 0; v < vertex_count; ++v) {
        if (holders[v].empty()) {
            out.push_back({"vertex-coverage", "vertex " + std::to_string(v) + " is in no bag"});
        }
    }

    for (auto [u, v] : edges) {
        if (u == v || u < 0 || v < 0 || u >= vertex_count || v >= vertex_count) {
            continue;
        }
        const auto& fewer = holders[u].size() <= holders[v].size() ? holders[u] : holders[v];
        Vertex other = holders[u].size() <= holders[v].size() ? v : u;
        bool covered = std::any_of(fewer.begin(), fewer.end(), [&](BagId b) { return td.contains(b, other); });
        if (!covered) {
            out.push_back({"edge-coverage", "edge {" + std::to_string(u) + "," + std::to_string(v) + "} is in no bag"});
        }
    }

    if (tree_ok) {
        // In a tree, the bags holding v induce a forest; it is connected iff
        // it has exactly (#bags holding v) - 1 edges.
        std::vector<int> internal_edges(vertex_count, 0);
        std::vector<Vertex> common;
        for (auto [a, b] : td.tree_edges()) {
            common.clear();
            std::set_intersection(td.bag(a).begin(), td.bag(a).end(), td.bag(b).begin(), td.bag(b).end(),
                                  std::back_inserter(common));
            for (Vertex v : common) {
                if (v >= 0 && v < vertex_count) {
                    ++internal_edges[v];
                }
            }
        }
        for (Vertex v = 0; v < vertex_count; ++v) {
            if (!holders[v].empty() && internal_edges[v] != static_cast<int>(holders[v].size()) - 1) {
                out.push_back({"subtree-connectivity",
                               "bags holding vertex " + std::to_string(v) + " do not form a connected subtree"});
            }
        }
    }
    return out;
}

TreeDecomposition heuristic_decompose(Vertex vertex_count, std::span<const GraphEdge> edges, Heuristic heuristic) {
    std::vector<std::set<Vertex>> adj(vertex_count);
    for (auto [u, v] : edges) {
        if (u == v) {
            continue;
        }
        if (u < 0 || v < 0 || u >= vertex_count || v >= vertex_count) {
            throw InvalidInput("edge references a vertex outside the graph");
        }
        adj[u].insert(v);
        adj[v].insert(u);
    }

    auto fill_in = [&](Vertex v) {
        long missing = 0;
        for (auto a = adj[v].begin(); a != adj[v].end(); ++a) {
            for (auto b = std::next(a); b != adj[v].end(); ++b) {
                if (!adj[*a].contains(*b)) {
                    ++missing;
                }
            }
        }
        return missing;
    };
    auto score = [&](Vertex v) -> long {
        return heuristic == Heuristic::MinDegree ? static_cast<long>(adj[v].size()) : fill_in(v);
    };

    using Entry = std::pair<long, Vertex>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    std::vector<long> current(vertex_count);
    for (Vertex v = 0; v < vertex_count; ++v) {
        current[v] = score(v);
        heap.emplace(current[v], v);
    }

    std::vector<char> done(vertex_count, 0);
    std::vector<Vertex> order;
    std::vector<std::vector<Vertex>> later_neighbours(vertex_count);
    order.reserve(vertex_count);
    while (!heap.empty()) {
        auto [s, v] = heap.top();
        heap.pop();
        if (done[v] || s != current[v]) {
            continue;
        }
        done[v] = 1;
        order.push_back(v);
        std::vector<Vertex> nbrs(adj[v].begin(), adj[v].end());
        later_neighbours[v] = nbrs;
        for (Vertex a : nbrs) {
            adj[a].erase(v);
        }
        for (std::size_t i = 0; i < nbrs.size(); ++i) {
            for (std::size_t j = i + 1; j < nbrs.size(); ++j) {
                adj[nbrs[i]].insert(nbrs[j]);
                adj[nbrs[j]].insert(nbrs[i]);
            }
        }
        adj[v].clear();

        std::set<Vertex> touched(nbrs.begin(), nbrs.end());
        if (heuristic == Heuristic::MinFill) {
            for (Vertex a : nbrs) {
                touched.insert(adj[a].begin(), adj[a].end());
            }
        }
        for (Vertex w : touched) {
            if (!done[w]) {
                long fresh = score(w);
                if (fresh != current[w]) {
                    current[w] = fresh;
                    heap.emplace(fresh, w);
                }
            }
        }
    }

    std::vector<int> position(vertex_count);
    for (std::size_t i = 0; i < order.size(); ++i) {
        position[order[i]] = static_cast<int>(i);
    }
    std::vector<std::vector<Vertex>> bags(order.size());
    std::vector<std::pair<BagId, BagId>> tree_edges;
    std::vector<BagId> component_roots;
    for (std::size_t i = 0; i < order.size(); ++i) {
        Vertex v = order[i];
        bags[i] = later_neighbours[v];
        bags[i].push_back(v);
        if (later_neighbours[v].empty()) {
            component_roots.push_back(static_cast<BagId>(i));
            continue;
        }
        Vertex next = *std::min_element(later_neighbours[v].begin(), later_neighbours[v].end(),
                                        [&](Vertex a, Vertex b) { return position[a] < position[b]; });
        tree_edges.emplace_back(static_cast<BagId>(i), static_cast<BagId>(position[next]));
    }
    for (std::size_t i = 1; i < component_roots.size(); ++i) {
        tree_edges.emplace_back(component_roots[i - 1], component_roots[i]);
    }
    return TreeDecomposition(std::move(bags), std::move(tree_edges));
}

TreeDecomposition add_to_all_bags(const TreeDecomposition& td, Vertex v) {
    auto bags = td.bags();
    if (bags.empty()) {
        bags.push_back({v});
    }
    for (auto& bag : bags) {
        bag.push_back(v);
    }
    return TreeDecomposition(std::move(bags), td.tree_edges());
}

TreeDecomposition remap_vertices(const TreeDecomposition& td, std::span<const Vertex> old_to_new) {
    std::vector<std::vector<Vertex>> bags(td.bag_count());
    for (BagId b = 0; b < td.bag_count(); ++b) {
        for (Vertex v : td.bag(b)) {
            if (v >= 0 && static_cast<std::size_t>(v) < old_to_new.size() && old_to_new[v] != kNoVertex) {
                bags[b].push_back(old_to_new[v]);
            }
        }
    }
    return TreeDecomposition(std::move(bags), td.tree_edges());
}

EliminationSchedule schedule(const TreeDecomposition& td, std::span<const Vertex> pinned) {
    EliminationSchedule out;
    const BagId bag_count = td.bag_count();
    if (bag_count == 0) {
        if (!pinned.empty()) {
            throw InvalidInput("pinned vertex not in root bag: decomposition has no bags");
        }
        return out;
    }

    out.root = kNoVertex;
    for (BagId b = 0; b < bag_count && out.root == kNoVertex; ++b) {
        if (std::all_of(pinned.begin(), pinned.end(), [&](Vertex v) { return td.contains(b, v); })) {
            out.root = b;
        }
    }
    if (out.root == kNoVertex) {
        throw InvalidInput("pinned vertex not in root bag: no bag holds every pinned vertex");
    }

    auto adj = tree_adjacency(td);
    out.parent.assign(bag_count, -1);
    std::vector<int> open_children(bag_count, 0);
    std::vector<char> visited(bag_count, 0);
    std::vector<BagId> stack{out.root};
    visited[out.root] = 1;
    while (!stack.empty()) {
        BagId b = stack.back();
        stack.pop_back();
        for (BagId c : adj[b]) {
            if (!visited[c]) {
                visited[c] = 1;
                out.parent[c] = b;
                ++open_children[b];
                stack.push_back(c);
            }
        }
    }
    if (std::find(visited.begin(), visited.end(), 0) != visited.end()) {
        throw InvalidInput("tree edges do not connect every bag");
    }

    const Vertex bound = td.vertex_bound();
    std::vector<char> is_pinned(bound, 0);
    for (Vertex v : pinned) {
        if (v >= 0 && v < bound) {
            is_pinned[v] = 1;
        }
    }
    std::vector<char> eliminated(bound, 0);

    std::priority_queue<BagId, std::vector<BagId>, std::greater<>> leaves;
    for (BagId b = 0; b < bag_count; ++b) {
        if (b != out.root && open_children[b] == 0) {
            leaves.push(b);
        }
    }
    out.steps.reserve(static_cast<std::size_t>(bag_count) + bound);
    while (!leaves.empty()) {
        BagId leaf = leaves.top();
        leaves.pop();
        BagId up = out.parent[leaf];
        for (Vertex u : td.bag(leaf)) {
            if (!is_pinned[u] && !eliminated[u] && !td.contains(up, u)) {
                eliminated[u] = 1;
                out.steps.push_back({ScheduleStep::Kind::EliminateVertex, leaf, u});
            }
        }
        out.steps.push_back({ScheduleStep::Kind::RemoveBag, leaf, kNoVertex});
        if (--open_children[up] == 0 && up != out.root) {
            leaves.push(up);
        }
    }
    for (Vertex u : td.bag(out.root)) {
        if (!is_pinned[u] && !eliminated[u]) {
            eliminated[u] = 1;
            out.steps.push_back({ScheduleStep::Kind::EliminateVertex, out.root, u});
        }
    }
    return out;
}

std::vector<Violation> audit_schedule(const TreeDecomposition& td, const EliminationSchedule& sched,
                                      std::span<const Vertex> pinned) {
    std::vector<Violation> out;
    const BagId bag_count = td.bag_count();
    const Vertex bound = td.vertex_bound();
    if (sched.parent.size() != static_cast<std::size_t>(bag_count)) {
        out.push_back({"schedule-shape", "parent array does not match the bag count"});
        return out;
    }
    std::vector<char> is_pinned(bound, 0);
    for (Vertex v : pinned) {
        if (v >= 0 && v < bound) {
            is_pinned[v] = 1;
        }
    }
    auto holders = bags_of_vertices(td, bound);
    std::vector<int> open_children(bag_count, 0);
    for (BagId b = 0; b < bag_count; ++b) {
        if (sched.parent[b] >= 0) {
            ++open_children[sched.parent[b]];
        }
    }
    std::vector<char> removed(bag_count, 0);
    std::vector<int> times_eliminated(bound, 0);

    auto live_subset = [&](BagId small, BagId big) {
        return std::all_of(td.bag(small).begin(), td.bag(small).end(),
                           [&](Vertex v) { return times_eliminated[v] > 0 || td.contains(big, v); });
    };

    for (const auto& step : sched.steps) {
        const std::string where = " (bag " + std::to_string(step.bag) + ")";
        if (step.bag < 0 || step.bag >= bag_count || removed[step.bag]) {
            out.push_back({"schedule-bag", "step refers to a missing bag" + where});
            continue;
        }
        if (step.kind == ScheduleStep::Kind::RemoveBag) {
            BagId up = sched.parent[step.bag];
            if (up < 0) {
                out.push_back({"leaf-removal", "root bag removed" + where});
                continue;
            }
            if (open_children[step.bag] != 0) {
                out.push_back({"leaf-removal", "removed bag is not a leaf" + where});
            }
            if (!live_subset(step.bag, up)) {
                out.push_back({"leaf-removal", "removed bag is not contained in its parent" + where});
            }
            removed[step.bag] = 1;
            --open_children[up];
            continue;
        }
        Vertex u = step.vertex;
        if (u < 0 || u >= bound || !td.contains(step.bag, u)) {
            out.push_back({"vertex-elimination", "vertex " + std::to_string(u) + " not in its step bag" + where});
            continue;
        }
        if (is_pinned[u]) {
            out.push_back({"vertex-elimination", "pinned vertex " + std::to_string(u) + " eliminated"});
        }
        for (BagId b : holders[u]) {
            if (b != step.bag && !removed[b]) {
                out.push_back({"vertex-elimination", "vertex " + std::to_string(u) + " still occurs in bag " +
                                                         std::to_string(b) + where});
                break;
            }
        }
        ++times_eliminated[u];
    }
    for (Vertex v = 0; v < bound; ++v) {
        if (holders[v].empty()) {
            continue;
        }
        int expected = is_pinned[v] ? 0 : 1;
        if (times_eliminated[v] != expected) {
            out.push_back({"vertex-elimination", "vertex " + std::to_string(v) + " eliminated " +
                                                     std::to_string(times_eliminated[v]) + " times"});
        }
    }
    return out;
}

}  // namespace twmc
