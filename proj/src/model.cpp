#include "twmc/model.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

namespace twmc {

namespace {

std::string edge_name(Vertex u, Vertex v) {
    std::ostringstream os;
    os << "(" << u << "," << v << ")";
    return os.str();
}

void check_row(const Adjacency& adj, Vertex u, std::vector<Violation>& out) {
    double sum = 0.0;
    for (const auto& s : adj.successors(u)) {
        if (s.weight < 0.0 || s.weight > 1.0) {
            out.push_back({"weight-range", "edge " + edge_name(u, s.dst) + " has weight " + std::to_string(s.weight)});
        }
        sum += s.weight;
    }
    if (std::abs(sum - 1.0) > kProbabilityTolerance) {
        std::ostringstream os;
        os.precision(17);
        os << "vertex " << u << " has outgoing weight sum " << sum;
        out.push_back({"row-sum", os.str()});
    }
}

}  // namespace

Adjacency::Adjacency(Vertex vertex_count, std::span<const Edge> edges) {
    if (vertex_count < 0) {
        throw InvalidInput("negative vertex count");
    }
    std::vector<Edge> sorted(edges.begin(), edges.end());
    for (const auto& e : sorted) {
        if (e.src < 0 || e.src >= vertex_count || e.dst < 0 || e.dst >= vertex_count) {
            throw InvalidInput("edge " + edge_name(e.src, e.dst) + " references a vertex outside 0.." +
                               std::to_string(vertex_count - 1));
        }
        if (!std::isfinite(e.weight) || !std::isfinite(e.reward)) {
            throw InvalidInput("edge " + edge_name(e.src, e.dst) + " has a non-finite weight or reward");
        }
    }
    std::stable_sort(sorted.begin(), sorted.end(), [](const Edge& a, const Edge& b) {
        return a.src != b.src ? a.src < b.src : a.dst < b.dst;
    });
    offsets_.assign(static_cast<std::size_t>(vertex_count) + 1, 0);
    succ_.reserve(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i > 0 && sorted[i].src == sorted[i - 1].src && sorted[i].dst == sorted[i - 1].dst) {
            throw InvalidInput("parallel edge " + edge_name(sorted[i].src, sorted[i].dst));
        }
        ++offsets_[sorted[i].src + 1];
        succ_.push_back({sorted[i].dst, sorted[i].weight, sorted[i].reward});
    }
    for (std::size_t v = 0; v < static_cast<std::size_t>(vertex_count); ++v) {
        offsets_[v + 1] += offsets_[v];
    }
}

const Successor* Adjacency::find(Vertex u, Vertex v) const {
    auto row = successors(u);
    auto it = std::lower_bound(row.begin(), row.end(), v, [](const Successor& s, Vertex d) { return s.dst < d; });
    if (it == row.end() || it->dst != v) {
        return nullptr;
    }
    return &*it;
}

std::vector<Edge> Adjacency::edges() const {
    std::vector<Edge> out;
    out.reserve(succ_.size());
    for (Vertex u = 0; u < vertex_count(); ++u) {
        for (const auto& s : successors(u)) {
            out.push_back({u, s.dst, s.weight, s.reward});
        }
    }
    return out;
}

bool MarkovChain::operator==(const MarkovChain& other) const {
    return vertex_count() == other.vertex_count() && strict_ == other.strict_ && edges() == other.edges();
}

MarkovDecisionProcess::MarkovDecisionProcess(std::vector<Owner> owner, std::span<const Edge> edges)
    : owner_(std::move(owner)) {
    std::vector<Edge> cleaned(edges.begin(), edges.end());
    for (auto& e : cleaned) {
        if (e.src >= 0 && static_cast<std::size_t>(e.src) < owner_.size() && owner_[e.src] == Owner::Player1) {
            e.weight = 0.0;
        }
    }
    adj_ = Adjacency(static_cast<Vertex>(owner_.size()), cleaned);
}

std::size_t MarkovDecisionProcess::player_count() const {
    return static_cast<std::size_t>(std::count(owner_.begin(), owner_.end(), Owner::Player1));
}

bool MarkovDecisionProcess::operator==(const MarkovDecisionProcess& other) const {
    return owner_ == other.owner_ && edges() == other.edges();
}

TargetSet::TargetSet(std::vector<Vertex> targets, Vertex vertex_count) : targets_(std::move(targets)) {
    if (targets_.empty()) {
        throw InvalidInput("target set is empty");
    }
    std::sort(targets_.begin(), targets_.end());
    targets_.erase(std::unique(targets_.begin(), targets_.end()), targets_.end());
    if (targets_.front() < 0 || targets_.back() >= vertex_count) {
        throw InvalidInput("target id outside 0.." + std::to_string(vertex_count - 1));
    }
}

bool TargetSet::contains(Vertex v) const {
    return std::binary_search(targets_.begin(), targets_.end(), v);
}

std::vector<Violation> validate_mc(const MarkovChain& mc, bool strict) {
    std::vector<Violation> out;
    if (!strict) {
        return out;
    }
    for (Vertex u = 0; u < mc.vertex_count(); ++u) {
        check_row(mc.adjacency(), u, out);
    }
    return out;
}

std::vector<Violation> validate_mdp(const MarkovDecisionProcess& mdp) {
    std::vector<Violation> out;
    for (Vertex u = 0; u < mdp.vertex_count(); ++u) {
        if (mdp.successors(u).empty()) {
            out.push_back({"no-successor", "vertex " + std::to_string(u) + " has no outgoing edge"});
            continue;
        }
        if (mdp.owner(u) == Owner::Probabilistic) {
            check_row(mdp.adjacency(), u, out);
        }
    }
    return out;
}

MarkovChain induce_mc(const MarkovDecisionProcess& mdp, const Strategy& sigma) {
    std::vector<Edge> edges;
    edges.reserve(mdp.edge_count());
    for (Vertex u = 0; u < mdp.vertex_count(); ++u) {
        if (mdp.owner(u) == Owner::Probabilistic) {
            for (const auto& s : mdp.successors(u)) {
                edges.push_back({u, s.dst, s.weight, s.reward});
            }
            continue;
        }
        Vertex choice = static_cast<std::size_t>(u) < sigma.choice.size() ? sigma.choice[u] : kNoVertex;
        if (choice == kNoVertex) {
            throw InvalidInput("strategy has no choice for Player1 vertex " + std::to_string(u));
        }
        const Successor* s = mdp.find(u, choice);
        if (s == nullptr) {
            throw InvalidInput("strategy picks non-edge " + edge_name(u, choice));
        }
        edges.push_back({u, choice, 1.0, s->reward});
    }
    return MarkovChain(mdp.vertex_count(), edges, true);
}

std::vector<bool> coreachable(const Adjacency& adj, std::span<const Vertex> targets) {
    const Vertex n = adj.vertex_count();
    std::vector<std::vector<Vertex>> preds(n);
    for (Vertex u = 0; u < n; ++u) {
        for (const auto& s : adj.successors(u)) {
            if (s.dst != u) {
                preds[s.dst].push_back(u);
            }
        }
    }
    std::vector<bool> seen(n, false);
    std::deque<Vertex> queue;
    for (Vertex t : targets) {
        if (!seen[t]) {
            seen[t] = true;
            queue.push_back(t);
        }
    }
    while (!queue.empty()) {
        Vertex v = queue.front();
        queue.pop_front();
        for (Vertex p : preds[v]) {
            if (!seen[p]) {
                seen[p] = true;
                queue.push_back(p);
            }
        }
    }
    return seen;
}

Restriction remove_non_coreachable(const MarkovChain& mc, const TargetSet& targets) {
    if (targets.size() == 0) {
        throw InvalidInput("target set is empty");
    }
    const Vertex n = mc.vertex_count();
    auto keep = coreachable(mc.adjacency(), targets.vertices());

    Restriction r;
    r.to_restricted.assign(n, kNoVertex);
    for (Vertex v = 0; v < n; ++v) {
        if (keep[v]) {
            r.to_restricted[v] = static_cast<Vertex>(r.to_original.size());
            r.to_original.push_back(v);
        } else {
            r.removed.push_back(v);
        }
    }
    if (r.removed.empty()) {
        r.chain = mc;
        return r;
    }
    std::vector<Edge> edges;
    for (Vertex u : r.to_original) {
        for (const auto& s : mc.successors(u)) {
            if (keep[s.dst]) {
                edges.push_back({r.to_restricted[u], r.to_restricted[s.dst], s.weight, s.reward});
            }
        }
    }
    r.chain = MarkovChain(static_cast<Vertex>(r.to_original.size()), edges, false);
    return r;
}

std::vector<std::pair<Vertex, Vertex>> skeleton(const Adjacency& adj) {
    std::vector<std::pair<Vertex, Vertex>> out;
    out.reserve(adj.edge_count());
    for (Vertex u = 0; u < adj.vertex_count(); ++u) {
        for (const auto& s : adj.successors(u)) {
            if (s.dst != u) {
                out.emplace_back(std::min(u, s.dst), std::max(u, s.dst));
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::pair<Vertex, Vertex>> skeleton(const MarkovChain& mc) { return skeleton(mc.adjacency()); }
std::vector<std::pair<Vertex, Vertex>> skeleton(const MarkovDecisionProcess& mdp) {
    return skeleton(mdp.adjacency());
}

}  // namespace twmc
