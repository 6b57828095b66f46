#include "oracles.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace oracle {

using twmc::Edge;
using twmc::Owner;

namespace {

std::vector<double> lu_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (!lu.isInvertible()) {
        throw std::runtime_error("oracle matrix is singular");
    }
    Eigen::VectorXd x = lu.solve(b);
    return std::vector<double>(x.data(), x.data() + x.size());
}

std::vector<char> backward_reach(const std::vector<Edge>& edges, Vertex n, const std::vector<Vertex>& targets) {
    std::vector<std::vector<Vertex>> rev(n);
    for (const auto& e : edges) rev[e.dst].push_back(e.src);
    std::vector<char> seen(n, 0);
    std::deque<Vertex> queue;
    for (Vertex t : targets) {
        if (!seen[t]) {
            seen[t] = 1;
            queue.push_back(t);
        }
    }
    while (!queue.empty()) {
        Vertex v = queue.front();
        queue.pop_front();
        for (Vertex u : rev[v]) {
            if (!seen[u]) {
                seen[u] = 1;
                queue.push_back(u);
            }
        }
    }
    return seen;
}

std::vector<double> hitting_dense(Vertex n, const std::vector<Edge>& edges, const std::vector<Vertex>& targets) {
    auto reach = backward_reach(edges, n, targets);
    std::vector<char> is_target(n, 0);
    for (Vertex t : targets) is_target[t] = 1;
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    for (Vertex t : targets) b[t] = 1.0;
    for (const auto& e : edges) {
        if (!is_target[e.src] && reach[e.src]) a(e.src, e.dst) -= e.weight;
    }
    return lu_solve(a, b);
}

std::vector<double> discounted_dense(Vertex n, const std::vector<Edge>& edges, double lambda) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    for (const auto& e : edges) {
        a(e.src, e.dst) -= lambda * e.weight;
        b[e.src] += e.weight * e.reward;
    }
    return lu_solve(a, b);
}

// Edges of the chain induced by the strategy encoded in `choice`.
std::vector<Edge> induced(const MarkovDecisionProcess& mdp, const std::vector<Vertex>& choice) {
    std::vector<Edge> out;
    for (const auto& e : mdp.edges()) {
        if (mdp.owner(e.src) == Owner::Player1) {
            if (choice[e.src] == e.dst) out.push_back({e.src, e.dst, 1.0, e.reward});
        } else {
            out.push_back(e);
        }
    }
    return out;
}

template <class Eval>
Enumerated enumerate(const MarkovDecisionProcess& mdp, Eval eval) {
    const Vertex n = mdp.vertex_count();
    std::vector<Vertex> players;
    for (Vertex v = 0; v < n; ++v) {
        if (mdp.owner(v) == Owner::Player1) players.push_back(v);
    }
    std::vector<std::size_t> digit(players.size(), 0);
    std::vector<Vertex> choice(n, twmc::kNoVertex);
    Enumerated out;
    out.best.assign(n, -std::numeric_limits<double>::infinity());
    while (true) {
        for (std::size_t i = 0; i < players.size(); ++i) {
            choice[players[i]] = mdp.successors(players[i])[digit[i]].dst;
        }
        auto val = eval(induced(mdp, choice));
        for (Vertex v = 0; v < n; ++v) out.best[v] = std::max(out.best[v], val[v]);
        ++out.count;
        std::size_t i = 0;
        while (i < players.size()) {
            if (++digit[i] < mdp.successors(players[i]).size()) break;
            digit[i] = 0;
            ++i;
        }
        if (i == players.size()) break;
    }
    return out;
}

std::vector<double> dirichlet(std::size_t k, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    std::vector<double> w(k);
    double total = 0.0;
    for (double& x : w) total += (x = u(rng));
    for (double& x : w) x /= total;
    return w;
}

}  // namespace

std::vector<double> hitting(const MarkovChain& mc, const std::vector<Vertex>& targets) {
    return hitting_dense(mc.vertex_count(), mc.edges(), targets);
}

std::vector<double> discounted(const MarkovChain& mc, double lambda) {
    return discounted_dense(mc.vertex_count(), mc.edges(), lambda);
}

std::vector<double> dense_solve(const twmc::LinearSystem& sys) {
    const Vertex n = sys.unknown_count;
    if (static_cast<Vertex>(sys.equations.size()) != n) {
        throw std::runtime_error("dense_solve needs a square system");
    }
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd b(n);
    for (Vertex i = 0; i < n; ++i) {
        for (const auto& t : sys.equations[i].terms) a(i, t.var) += t.coef;
        b[i] = sys.equations[i].rhs;
    }
    return lu_solve(a, b);
}

Exact rational_classify(const twmc::LinearSystem& sys) {
    using Q = boost::multiprecision::cpp_rational;
    const std::size_t n = sys.unknown_count;
    const std::size_t m = sys.equations.size();
    std::vector<std::vector<Q>> a(m, std::vector<Q>(n + 1, Q(0)));
    for (std::size_t i = 0; i < m; ++i) {
        for (const auto& t : sys.equations[i].terms) {
            a[i][t.var] += Q(static_cast<long long>(std::llround(t.coef)));
        }
        a[i][n] = Q(static_cast<long long>(std::llround(sys.equations[i].rhs)));
    }
    std::size_t rank = 0;
    std::vector<std::size_t> pivot_col;
    for (std::size_t c = 0; c < n && rank < m; ++c) {
        std::size_t p = rank;
        while (p < m && a[p][c] == 0) ++p;
        if (p == m) continue;
        std::swap(a[p], a[rank]);
        for (std::size_t r = 0; r < m; ++r) {
            if (r == rank || a[r][c] == 0) continue;
            Q f = a[r][c] / a[rank][c];
            for (std::size_t j = c; j <= n; ++j) a[r][j] -= f * a[rank][j];
        }
        pivot_col.push_back(c);
        ++rank;
    }
    for (std::size_t r = rank; r < m; ++r) {
        if (a[r][n] != 0) return {Kind::Unsatisfiable, {}};
    }
    if (rank < n) return {Kind::Underdetermined, {}};
    std::vector<double> x(n);
    for (std::size_t r = 0; r < rank; ++r) {
        Q v = a[r][n] / a[r][pivot_col[r]];
        x[pivot_col[r]] = v.convert_to<double>();
    }
    return {Kind::Unique, x};
}

KTree random_ktree(Vertex n, int k, std::mt19937_64& rng, double keep) {
    KTree out;
    std::bernoulli_distribution coin(keep);
    std::vector<std::vector<Vertex>> bags;
    std::vector<std::pair<twmc::BagId, twmc::BagId>> tree;
    const Vertex base = std::min<Vertex>(n, k + 1);
    std::vector<Vertex> first(base);
    for (Vertex v = 0; v < base; ++v) first[v] = v;
    bags.push_back(first);
    for (Vertex u = 0; u < base; ++u) {
        for (Vertex v = u + 1; v < base; ++v) {
            if (v == u + 1 || coin(rng)) out.edges.emplace_back(u, v);
        }
    }
    for (Vertex v = base; v < n; ++v) {
        std::uniform_int_distribution<std::size_t> pick_bag(0, bags.size() - 1);
        std::size_t parent = pick_bag(rng);
        std::vector<Vertex> subset = bags[parent];
        if (static_cast<int>(subset.size()) > k) {
            std::uniform_int_distribution<std::size_t> drop(0, subset.size() - 1);
            subset.erase(subset.begin() + static_cast<std::ptrdiff_t>(drop(rng)));
        }
        std::uniform_int_distribution<std::size_t> must(0, subset.size() - 1);
        std::size_t forced = must(rng);
        for (std::size_t i = 0; i < subset.size(); ++i) {
            if (i == forced || coin(rng)) out.edges.emplace_back(std::min(subset[i], v), std::max(subset[i], v));
        }
        subset.push_back(v);
        bags.push_back(subset);
        tree.emplace_back(static_cast<twmc::BagId>(parent), static_cast<twmc::BagId>(bags.size() - 1));
    }
    out.td = TreeDecomposition(std::move(bags), std::move(tree));
    return out;
}

RandomChain random_chain(Vertex n, int k, std::uint64_t seed, int reward_lo, int reward_hi, bool both_directions,
                         double self_loop_prob) {
    std::mt19937_64 rng(seed);
    KTree kt = random_ktree(n, k, rng);
    std::vector<std::vector<Vertex>> succ(n);
    std::vector<std::vector<Vertex>> nbr(n);
    std::uniform_int_distribution<int> dir(0, 2);
    std::bernoulli_distribution loop(self_loop_prob);
    for (const auto& [u, v] : kt.edges) {
        nbr[u].push_back(v);
        nbr[v].push_back(u);
        int d = both_directions ? 2 : dir(rng);
        if (d != 1) succ[u].push_back(v);
        if (d != 0) succ[v].push_back(u);
    }
    for (Vertex v = 0; v < n; ++v) {
        if (loop(rng)) succ[v].push_back(v);
        if (succ[v].empty()) {
            if (nbr[v].empty() || std::bernoulli_distribution(0.5)(rng)) {
                succ[v].push_back(v);
            } else {
                std::uniform_int_distribution<std::size_t> pick(0, nbr[v].size() - 1);
                succ[v].push_back(nbr[v][pick(rng)]);
            }
        }
    }
    std::uniform_int_distribution<int> reward(reward_lo, reward_hi);
    std::vector<Edge> edges;
    for (Vertex u = 0; u < n; ++u) {
        auto w = dirichlet(succ[u].size(), rng);
        for (std::size_t i = 0; i < succ[u].size(); ++i) {
            edges.push_back({u, succ[u][i], w[i], static_cast<double>(reward(rng))});
        }
    }
    return {MarkovChain(n, edges, true), std::move(kt.td)};
}

RandomMdp random_mdp(Vertex n, int k, std::uint64_t seed, int max_player, int max_degree, int reward_lo,
                     int reward_hi) {
    std::mt19937_64 rng(seed);
    KTree kt = random_ktree(n, k, rng);
    std::vector<std::vector<Vertex>> succ(n);
    std::uniform_int_distribution<int> dir(0, 2);
    for (const auto& [u, v] : kt.edges) {
        int d = dir(rng);
        if (d != 1 && static_cast<int>(succ[u].size()) < max_degree) succ[u].push_back(v);
        if (d != 0 && static_cast<int>(succ[v].size()) < max_degree) succ[v].push_back(u);
    }
    for (Vertex v = 0; v < n; ++v) {
        if (succ[v].empty()) succ[v].push_back(v);
    }
    std::vector<Vertex> candidates;
    for (Vertex v = 0; v < n; ++v) {
        if (succ[v].size() >= 2) candidates.push_back(v);
    }
    std::shuffle(candidates.begin(), candidates.end(), rng);
    std::vector<Owner> owners(n, Owner::Probabilistic);
    for (int i = 0; i < max_player && i < static_cast<int>(candidates.size()); ++i) {
        owners[candidates[i]] = Owner::Player1;
    }
    std::uniform_int_distribution<int> reward(reward_lo, reward_hi);
    std::vector<Edge> edges;
    for (Vertex u = 0; u < n; ++u) {
        auto w = dirichlet(succ[u].size(), rng);
        for (std::size_t i = 0; i < succ[u].size(); ++i) {
            double weight = owners[u] == Owner::Player1 ? 0.0 : w[i];
            edges.push_back({u, succ[u][i], weight, static_cast<double>(reward(rng))});
        }
    }
    return {MarkovDecisionProcess(owners, edges), std::move(kt.td)};
}

std::vector<double> power_stationary(const MarkovChain& mc, int steps) {
    const Vertex n = mc.vertex_count();
    std::vector<double> x(n, 1.0 / n), next(n);
    for (int s = 0; s < steps; ++s) {
        for (Vertex v = 0; v < n; ++v) next[v] = 0.5 * x[v];
        for (Vertex u = 0; u < n; ++u) {
            for (const auto& e : mc.successors(u)) next[e.dst] += 0.5 * x[u] * e.weight;
        }
        x.swap(next);
    }
    return x;
}

namespace {

Vertex step(const MarkovChain& mc, Vertex u, std::mt19937_64& rng, double* reward) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    double r = u01(rng);
    auto succ = mc.successors(u);
    for (const auto& s : succ) {
        if (r < s.weight) {
            *reward = s.reward;
            return s.dst;
        }
        r -= s.weight;
    }
    *reward = succ.back().reward;
    return succ.back().dst;
}

}  // namespace

double simulate_mean_payoff(const MarkovChain& mc, Vertex start, long steps, std::mt19937_64& rng) {
    double total = 0.0;
    Vertex u = start;
    for (long i = 0; i < steps; ++i) {
        double r = 0.0;
        u = step(mc, u, rng, &r);
        total += r;
    }
    return total / static_cast<double>(steps);
}

double simulate_transient_mean_payoff(const MarkovChain& mc, Vertex start, const std::vector<double>& bscc_value,
                                      const std::vector<int>& component, const std::vector<char>& bottom,
                                      long walks, std::mt19937_64& rng) {
    double total = 0.0;
    for (long w = 0; w < walks; ++w) {
        Vertex u = start;
        while (!bottom[component[u]]) {
            double r = 0.0;
            u = step(mc, u, rng, &r);
        }
        total += bscc_value[component[u]];
    }
    return total / static_cast<double>(walks);
}

Enumerated enumerate_hitting(const MarkovDecisionProcess& mdp, const std::vector<Vertex>& targets) {
    return enumerate(mdp, [&](const std::vector<Edge>& e) { return hitting_dense(mdp.vertex_count(), e, targets); });
}

Enumerated enumerate_discounted(const MarkovDecisionProcess& mdp, double lambda) {
    return enumerate(mdp, [&](const std::vector<Edge>& e) { return discounted_dense(mdp.vertex_count(), e, lambda); });
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

}  // namespace oracle
