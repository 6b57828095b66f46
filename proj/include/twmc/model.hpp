#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "twmc/common.hpp"
#include "twmc/report.hpp"

namespace twmc {

/// Input edge: transition weight delta(src)(dst) and reward R(src, dst).
struct Edge {
    Vertex src = 0;
    Vertex dst = 0;
    double weight = 0.0;
    double reward = 0.0;

    bool operator==(const Edge&) const = default;
};

struct Successor {
    Vertex dst = 0;
    double weight = 0.0;
    double reward = 0.0;
};

/// Immutable compressed adjacency keyed by source, successors sorted by
/// destination so single-edge lookup is a binary search.
class Adjacency {
public:
    Adjacency() = default;
    /// Throws InvalidInput on out-of-range ids, non-finite values or a
    /// repeated (src, dst) pair.
    Adjacency(Vertex vertex_count, std::span<const Edge> edges);

    Vertex vertex_count() const { return static_cast<Vertex>(offsets_.empty() ? 0 : offsets_.size() - 1); }
    std::size_t edge_count() const { return succ_.size(); }

    std::span<const Successor> successors(Vertex u) const {
        return {succ_.data() + offsets_[u], succ_.data() + offsets_[u + 1]};
    }
    const Successor* find(Vertex u, Vertex v) const;
    std::vector<Edge> edges() const;

private:
    std::vector<std::size_t> offsets_;
    std::vector<Successor> succ_;
};

class MarkovChain {
public:
    MarkovChain() = default;
    /// strict marks a genuine stochastic chain; generalized chains (arbitrary
    /// real weights) are built with strict = false.
    MarkovChain(Vertex vertex_count, std::span<const Edge> edges, bool strict = true)
        : adj_(vertex_count, edges), strict_(strict) {}

    Vertex vertex_count() const { return adj_.vertex_count(); }
    std::size_t edge_count() const { return adj_.edge_count(); }
    bool strict_mode() const { return strict_; }
    std::span<const Successor> successors(Vertex u) const { return adj_.successors(u); }
    const Successor* find(Vertex u, Vertex v) const { return adj_.find(u, v); }
    std::vector<Edge> edges() const { return adj_.edges(); }
    const Adjacency& adjacency() const { return adj_; }

    bool operator==(const MarkovChain& other) const;

private:
    Adjacency adj_;
    bool strict_ = true;
};

enum class Owner { Player1, Probabilistic };

class MarkovDecisionProcess {
public:
    MarkovDecisionProcess() = default;
    /// Edge weights are ignored on Player1 sources (stored as 0).
    MarkovDecisionProcess(std::vector<Owner> owner, std::span<const Edge> edges);

    Vertex vertex_count() const { return adj_.vertex_count(); }
    std::size_t edge_count() const { return adj_.edge_count(); }
    Owner owner(Vertex v) const { return owner_[v]; }
    const std::vector<Owner>& owners() const { return owner_; }
    std::span<const Successor> successors(Vertex u) const { return adj_.successors(u); }
    const Successor* find(Vertex u, Vertex v) const { return adj_.find(u, v); }
    std::vector<Edge> edges() const { return adj_.edges(); }
    const Adjacency& adjacency() const { return adj_; }
    std::size_t player_count() const;

    bool operator==(const MarkovDecisionProcess& other) const;

private:
    std::vector<Owner> owner_;
    Adjacency adj_;
};

/// Nonempty sorted set of in-range target vertices.
class TargetSet {
public:
    TargetSet() = default;
    /// Throws InvalidInput if empty or some id is outside [0, vertex_count).
    TargetSet(std::vector<Vertex> targets, Vertex vertex_count);

    const std::vector<Vertex>& vertices() const { return targets_; }
    std::size_t size() const { return targets_.size(); }
    bool contains(Vertex v) const;

private:
    std::vector<Vertex> targets_;
};

std::vector<Violation> validate_mc(const MarkovChain& mc, bool strict);
std::vector<Violation> validate_mdp(const MarkovDecisionProcess& mdp);

/// Fixes the strategy: each Player1 vertex keeps only its chosen edge with
/// weight 1 and its original reward.
MarkovChain induce_mc(const MarkovDecisionProcess& mdp, const Strategy& sigma);

struct Restriction {
    MarkovChain chain;
    std::vector<Vertex> removed;       // original ids, ascending
    std::vector<Vertex> to_original;   // restricted id -> original id
    std::vector<Vertex> to_restricted; // original id -> restricted id or kNoVertex
};

/// Drops every vertex without a path to a target; edges into dropped
/// vertices go with them, so the result is a generalized (non-strict) chain.
Restriction remove_non_coreachable(const MarkovChain& mc, const TargetSet& targets);

/// Backward reachability from `targets` over an arbitrary adjacency.
std::vector<bool> coreachable(const Adjacency& adj, std::span<const Vertex> targets);

/// Undirected skeleton without self-loops, each pair once with u < v.
std::vector<std::pair<Vertex, Vertex>> skeleton(const Adjacency& adj);
std::vector<std::pair<Vertex, Vertex>> skeleton(const MarkovChain& mc);
std::vector<std::pair<Vertex, Vertex>> skeleton(const MarkovDecisionProcess& mdp);

}  // namespace twmc
