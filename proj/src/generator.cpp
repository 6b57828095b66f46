#include "twmc/generator.hpp"

#include <algorithm>
#include <numeric>

namespace twmc {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t state = seed ^ (stream * 0xd1342543de82ef95ULL);
    std::seed_seq seq{static_cast<std::uint32_t>(splitmix64(state)), static_cast<std::uint32_t>(splitmix64(state)),
                      static_cast<std::uint32_t>(splitmix64(state)), static_cast<std::uint32_t>(splitmix64(state))};
    engine_.seed(seq);
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::open_uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

std::uint64_t Rng::below(std::uint64_t bound) {
    const std::uint64_t limit = bound * (~std::uint64_t{0} / bound);
    std::uint64_t x;
    do {
        x = next();
    } while (x >= limit);
    return x % bound;
}

std::int64_t Rng::between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
}

GenKind parse_gen_kind(const std::string& name) {
    if (name == "cfg-like") return GenKind::CfgLike;
    if (name == "path") return GenKind::Path;
    if (name == "cycle") return GenKind::Cycle;
    if (name == "grid-band") return GenKind::GridBand;
    throw InvalidInput("unknown generator kind '" + name + "'");
}

std::string gen_kind_name(GenKind kind) {
    switch (kind) {
        case GenKind::CfgLike: return "cfg-like";
        case GenKind::Path: return "path";
        case GenKind::Cycle: return "cycle";
        case GenKind::GridBand: return "grid-band";
    }
    return "?";
}

namespace {

enum Stream : std::uint64_t { kStructure = 1, kOwners, kWeights, kRewards, kTargets, kLambda };

struct Skeleton {
    Vertex n = 0;
    std::vector<std::pair<Vertex, Vertex>> edges;
    std::vector<std::vector<Vertex>> bags;
    std::vector<std::pair<BagId, BagId>> tree;

    BagId add_bag(std::vector<Vertex> bag, BagId parent) {
        BagId id = static_cast<BagId>(bags.size());
        bags.push_back(std::move(bag));
        if (parent >= 0) {
            tree.emplace_back(parent, id);
        }
        return id;
    }
};

// Branching program without joins: a random out-degree-2 tree.
Skeleton tree_program(Vertex n, Rng& rng) {
    Skeleton s;
    s.n = n;
    std::vector<Vertex> open{0};
    std::vector<int> degree(n, 0);
    std::vector<BagId> entry_bag(n, -1);
    for (Vertex v = 1; v < n; ++v) {
        std::size_t pick = rng.below(open.size());
        Vertex p = open[pick];
        s.edges.emplace_back(p, v);
        BagId b = s.add_bag({p, v}, entry_bag[p]);
        entry_bag[v] = b;
        if (entry_bag[p] < 0) {
            entry_bag[p] = b;
        }
        if (++degree[p] == 2) {
            open.erase(open.begin() + static_cast<std::ptrdiff_t>(pick));
        }
        open.push_back(v);
    }
    for (Vertex v = 0; v < n; ++v) {
        if (degree[v] == 0) {
            s.edges.emplace_back(v, v);
        }
    }
    if (s.bags.empty()) {
        s.add_bag({0}, -1);
    }
    return s;
}

Skeleton cfg_like(Vertex n, int width, Rng& rng) {
    if (n <= 1 || width <= 1) {
        return tree_program(std::max<Vertex>(n, 1), rng);
    }
    Skeleton s;
    s.n = n;
    struct Block {
        Vertex e, x;
        std::vector<Vertex> ctx;
        Vertex budget;
        BagId parent;
    };
    Vertex next_id = 2;
    auto fresh = [&] { return next_id++; };
    auto bag_of = [](std::vector<Vertex> base, const std::vector<Vertex>& ctx) {
        base.insert(base.end(), ctx.begin(), ctx.end());
        std::sort(base.begin(), base.end());
        return base;
    };

    std::vector<Block> work;
    work.push_back({0, 1, {}, n - 2, -1});
    while (!work.empty()) {
        Block b = std::move(work.back());
        work.pop_back();
        const bool can_loop = static_cast<int>(b.ctx.size()) + 1 <= width - 2;

        enum { Statement, Sequence, IfThen, IfElse, While } kind = Statement;
        if (b.budget > 0) {
            // Weights: sequence 3, if-then 2, if-else 2, while 2.
            std::vector<std::pair<int, int>> options{{Sequence, 3}, {IfThen, 2}};
            if (b.budget >= 2) options.emplace_back(IfElse, 2);
            if (can_loop) options.emplace_back(While, 2);
            int total = 0;
            for (const auto& o : options) total += o.second;
            int r = static_cast<int>(rng.below(static_cast<std::uint64_t>(total)));
            for (const auto& o : options) {
                if (r < o.second) {
                    kind = static_cast<decltype(kind)>(o.first);
                    break;
                }
                r -= o.second;
            }
        }

        switch (kind) {
            case Statement: {
                if (b.parent < 0) {
                    s.add_bag(bag_of({b.e, b.x}, b.ctx), -1);
                }
                s.edges.emplace_back(b.e, b.x);
                if (!b.ctx.empty() && rng.chance(0.25)) {
                    Vertex k = b.ctx[rng.below(b.ctx.size())];
                    if (k != b.x) {
                        s.edges.emplace_back(b.e, k);
                    }
                }
                break;
            }
            case Sequence: {
                Vertex m = fresh();
                BagId id = s.add_bag(bag_of({b.e, m, b.x}, b.ctx), b.parent);
                Vertex rest = b.budget - 1;
                Vertex first = static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(rest) + 1));
                work.push_back({m, b.x, b.ctx, rest - first, id});
                work.push_back({b.e, m, b.ctx, first, id});
                break;
            }
            case IfThen: {
                Vertex a = fresh();
                BagId id = s.add_bag(bag_of({b.e, a, b.x}, b.ctx), b.parent);
                s.edges.emplace_back(b.e, a);
                s.edges.emplace_back(b.e, b.x);
                work.push_back({a, b.x, b.ctx, b.budget - 1, id});
                break;
            }
            case IfElse: {
                Vertex a = fresh();
                Vertex c = fresh();
                BagId root = s.add_bag(bag_of({b.e, b.x}, b.ctx), b.parent);
                BagId left = s.add_bag(bag_of({b.e, a, b.x}, b.ctx), root);
                BagId right = s.add_bag(bag_of({b.e, c, b.x}, b.ctx), root);
                s.edges.emplace_back(b.e, a);
                s.edges.emplace_back(b.e, c);
                Vertex rest = b.budget - 2;
                Vertex first = static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(rest) + 1));
                work.push_back({c, b.x, b.ctx, rest - first, right});
                work.push_back({a, b.x, b.ctx, first, left});
                break;
            }
            case While: {
                Vertex a = fresh();
                BagId id = s.add_bag(bag_of({b.e, a, b.x}, b.ctx), b.parent);
                s.edges.emplace_back(b.e, a);
                s.edges.emplace_back(b.e, b.x);
                std::vector<Vertex> inner = b.ctx;
                inner.push_back(b.x);
                work.push_back({a, b.e, std::move(inner), b.budget - 1, id});
                break;
            }
        }
    }
    s.edges.emplace_back(1, 1);
    return s;
}

Skeleton path(Vertex n) {
    Skeleton s;
    s.n = n;
    if (n == 1) {
        s.edges.emplace_back(0, 0);
        s.add_bag({0}, -1);
        return s;
    }
    for (Vertex i = 0; i < n; ++i) {
        if (i > 0) s.edges.emplace_back(i, i - 1);
        if (i + 1 < n) s.edges.emplace_back(i, i + 1);
    }
    for (Vertex i = 0; i + 1 < n; ++i) {
        s.add_bag({i, i + 1}, i - 1);
    }
    return s;
}

Skeleton cycle(Vertex n) {
    if (n <= 2) {
        return path(n);
    }
    Skeleton s;
    s.n = n;
    for (Vertex i = 0; i < n; ++i) {
        Vertex a = (i + 1) % n;
        Vertex b = (i + n - 1) % n;
        s.edges.emplace_back(i, std::min(a, b));
        s.edges.emplace_back(i, std::max(a, b));
    }
    for (Vertex i = 1; i + 1 < n; ++i) {
        s.add_bag({0, i, i + 1}, i - 2);
    }
    return s;
}

Skeleton grid_band(Vertex n, int width, Rng& rng) {
    const Vertex k = std::max(width, 1);
    Skeleton s;
    s.n = n;
    for (Vertex v = 0; v < n; ++v) {
        std::vector<Vertex> out;
        if (v % k != k - 1 && v + 1 < n) out.push_back(v + 1);
        if (v + k < n) out.push_back(v + k);
        if (v > 0 && (out.empty() || rng.chance(0.3))) {
            Vertex back = static_cast<Vertex>(rng.between(1, std::min(k, v)));
            out.push_back(v - back);
        }
        if (out.empty()) out.push_back(v);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        for (Vertex w : out) s.edges.emplace_back(v, w);
    }
    if (n <= k + 1) {
        std::vector<Vertex> all(n);
        std::iota(all.begin(), all.end(), 0);
        s.add_bag(all, -1);
        return s;
    }
    for (Vertex start = 0; start + k < n; ++start) {
        std::vector<Vertex> bag(k + 1);
        std::iota(bag.begin(), bag.end(), start);
        s.add_bag(std::move(bag), start - 1);
    }
    return s;
}

std::vector<Vertex> component_targets(const Skeleton& s, Rng& rng) {
    std::vector<Vertex> parent(s.n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](Vertex v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    };
    for (const auto& [u, v] : s.edges) {
        Vertex a = find(u), b = find(v);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    std::vector<std::vector<Vertex>> groups(s.n);
    for (Vertex v = 0; v < s.n; ++v) groups[find(v)].push_back(v);
    std::vector<Vertex> targets;
    for (const auto& g : groups) {
        if (!g.empty()) targets.push_back(g[rng.below(g.size())]);
    }
    return targets;
}

}  // namespace

Instance generate(const GenConfig& cfg) {
    if (cfg.n < 1) {
        throw InvalidInput("generator needs n >= 1");
    }
    if (cfg.width_cap < 1) {
        throw InvalidInput("width cap must be at least 1");
    }
    if (!(cfg.player_prob >= 0.0 && cfg.player_prob <= 1.0)) {
        throw InvalidInput("player probability must lie in [0, 1]");
    }
    if (cfg.reward_lo > cfg.reward_hi) {
        throw InvalidInput("empty reward range");
    }
    if (cfg.kind == GenKind::Cycle && cfg.width_cap < 2 && cfg.n > 2) {
        throw InvalidInput("cycle instances need width cap >= 2");
    }

    Rng structure(cfg.seed, kStructure);
    Skeleton s;
    switch (cfg.kind) {
        case GenKind::CfgLike: s = cfg_like(cfg.n, cfg.width_cap, structure); break;
        case GenKind::Path: s = path(cfg.n); break;
        case GenKind::Cycle: s = cycle(cfg.n); break;
        case GenKind::GridBand: s = grid_band(cfg.n, cfg.width_cap, structure); break;
    }
    std::sort(s.edges.begin(), s.edges.end());

    Rng owners_rng(cfg.seed, kOwners);
    Rng weights_rng(cfg.seed, kWeights);
    Rng rewards_rng(cfg.seed, kRewards);
    std::vector<Owner> owners(s.n);
    for (Vertex v = 0; v < s.n; ++v) {
        owners[v] = owners_rng.chance(cfg.player_prob) ? Owner::Player1 : Owner::Probabilistic;
    }

    std::vector<Edge> edges;
    edges.reserve(s.edges.size());
    for (std::size_t i = 0; i < s.edges.size();) {
        std::size_t j = i;
        while (j < s.edges.size() && s.edges[j].first == s.edges[i].first) ++j;
        const Vertex u = s.edges[i].first;
        std::vector<double> w(j - i, 0.0);
        if (owners[u] == Owner::Probabilistic) {
            double total = 0.0;
            for (double& x : w) {
                x = weights_rng.open_uniform();
                total += x;
            }
            for (double& x : w) x /= total;
        }
        for (std::size_t e = i; e < j; ++e) {
            double reward = static_cast<double>(rewards_rng.between(cfg.reward_lo, cfg.reward_hi));
            edges.push_back({u, s.edges[e].second, w[e - i], reward});
        }
        i = j;
    }

    Rng target_rng(cfg.seed, kTargets);
    Rng lambda_rng(cfg.seed, kLambda);
    Instance inst;
    inst.mdp = MarkovDecisionProcess(std::move(owners), edges);
    inst.td = TreeDecomposition(std::move(s.bags), std::move(s.tree));
    inst.targets = TargetSet(component_targets(s, target_rng), s.n);
    inst.spec.lambda = 0.01 + 0.98 * lambda_rng.open_uniform();
    return inst;
}

MarkovChain to_mc(const MarkovDecisionProcess& mdp) {
    std::vector<Edge> edges;
    edges.reserve(mdp.edge_count());
    for (Vertex u = 0; u < mdp.vertex_count(); ++u) {
        auto succ = mdp.successors(u);
        const bool player = mdp.owner(u) == Owner::Player1;
        for (const auto& s : succ) {
            double w = player ? 1.0 / static_cast<double>(succ.size()) : s.weight;
            edges.push_back({u, s.dst, w, s.reward});
        }
    }
    return MarkovChain(mdp.vertex_count(), edges, true);
}

}  // namespace twmc
