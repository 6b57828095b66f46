#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "twmc/hitting.hpp"
#include "twmc/io.hpp"
#include "twmc/linsys.hpp"
#include "twmc/mean_payoff.hpp"

using namespace twmc;

namespace {

Equation eq(std::vector<Term> terms, double rhs) { return {std::move(terms), rhs}; }

LinearSystem tridiagonal(Vertex n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1, 1);
    LinearSystem sys{n, {}};
    for (Vertex i = 0; i < n; ++i) {
        Equation e;
        if (i > 0) e.terms.push_back({i - 1, u(rng)});
        e.terms.push_back({i, 4 + u(rng)});
        if (i + 1 < n) e.terms.push_back({i + 1, u(rng)});
        e.rhs = u(rng) * 10;
        sys.equations.push_back(e);
    }
    return sys;
}

// Bags {i, i+1, i+2}: each tridiagonal row is a triangle in the primal graph.
TreeDecomposition band_td(Vertex n) {
    std::vector<std::vector<Vertex>> bags;
    std::vector<std::pair<BagId, BagId>> edges;
    for (Vertex i = 0; i + 2 < n; ++i) {
        bags.push_back({i, i + 1, i + 2});
        if (i > 0) edges.emplace_back(i - 1, i);
    }
    return TreeDecomposition(bags, edges);
}

}  // namespace

TEST(PrimalGraph, DiagonalAndTriangle) {
    LinearSystem diag{3, {eq({{0, 1}}, 1), eq({{1, 2}}, 1), eq({{2, 3}}, 1)}};
    EXPECT_TRUE(build_primal(diag).edges.empty());
    LinearSystem one{3, {eq({{0, 1}, {1, 1}, {2, 1}}, 0)}};
    EXPECT_EQ(build_primal(one).edges, (std::vector<GraphEdge>{{0, 1}, {0, 2}, {1, 2}}));
}

TEST(PrimalGraph, SkeletonPlusSiblingEdges) {
    // Each row of x = P x joins u with its successors and the successors with
    // each other, so the primal graph is the skeleton plus edges between
    // vertices that share a predecessor.
    auto rc = oracle::random_chain(50, 3, 4);
    auto sys = hitting_system(rc.mc, TargetSet({rc.mc.vertex_count() - 1}, rc.mc.vertex_count()));
    LinearSystem full{rc.mc.vertex_count(), {}};
    for (Vertex u = 0; u < rc.mc.vertex_count(); ++u) {
        Equation e;
        e.terms.push_back({u, 1.0});
        for (const auto& s : rc.mc.successors(u)) {
            if (s.dst != u) e.terms.push_back({s.dst, -s.weight});
        }
        full.equations.push_back(e);
    }
    auto primal = build_primal(full).edges;
    auto sk = skeleton(rc.mc);
    std::set<GraphEdge> expected(sk.begin(), sk.end());
    for (Vertex u = 0; u < rc.mc.vertex_count(); ++u) {
        auto s = rc.mc.successors(u);
        for (std::size_t i = 0; i < s.size(); ++i)
            for (std::size_t j = i + 1; j < s.size(); ++j)
                if (s[i].dst != u && s[j].dst != u) expected.insert({s[i].dst, s[j].dst});
    }
    EXPECT_EQ(primal, std::vector<GraphEdge>(expected.begin(), expected.end()));
    EXPECT_TRUE(validate_system(sys).empty());
}

TEST(GramSchmidt, DuplicatesAndContradictions) {
    auto dup = gram_schmidt_reduce(std::vector<Equation>{eq({{0, 1}, {1, 2}}, 3), eq({{0, 1}, {1, 2}}, 3)});
    EXPECT_FALSE(dup.unsatisfiable);
    EXPECT_EQ(dup.rows.size(), 1u);
    auto bad = gram_schmidt_reduce(std::vector<Equation>{eq({{0, 1}}, 1), eq({{0, 1}}, 2)});
    EXPECT_TRUE(bad.unsatisfiable);
}

TEST(GramSchmidt, RankTwoOfThreeConsistentRows) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int trial = 0; trial < 50; ++trial) {
        const double x = u(rng), y = u(rng);
        std::vector<Equation> rows;
        for (int i = 0; i < 3; ++i) {
            double a = u(rng), b = u(rng);
            rows.push_back(eq({{0, a}, {1, b}}, a * x + b * y));
        }
        auto red = gram_schmidt_reduce(rows);
        ASSERT_FALSE(red.unsatisfiable);
        ASSERT_EQ(red.rows.size(), 2u);
        LinearSystem sys{2, {red.rows[0].eq, red.rows[1].eq}};
        auto sol = oracle::dense_solve(sys);
        EXPECT_NEAR(sol[0], x, 1e-9);
        EXPECT_NEAR(sol[1], y, 1e-9);
    }
}

TEST(SolveSystemTd, SmallCases) {
    LinearSystem two{2, {eq({{0, 1}}, 1), eq({{1, 1}, {0, -1}}, 1)}};
    TreeDecomposition td({{0, 1}}, {});
    auto sol = solve_system_td(two, build_primal(two), td);
    ASSERT_EQ(sol.outcome.status, SolveStatus::Unique);
    EXPECT_DOUBLE_EQ(sol.outcome.assignment[0], 1.0);
    EXPECT_DOUBLE_EQ(sol.outcome.assignment[1], 2.0);

    LinearSystem under{2, {eq({{0, 1}, {1, 1}}, 1)}};
    EXPECT_EQ(solve_system_td(under, build_primal(under), td).outcome.status, SolveStatus::Underdetermined);

    auto unsat = read_ls_file(TWMC_TEST_DATA "/unsat.ls");
    EXPECT_EQ(solve_system_td(unsat, build_primal(unsat), td).outcome.status, SolveStatus::Unsatisfiable);
}

TEST(SolveSystemTd, TridiagonalMatchesDense) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto sys = tridiagonal(50, seed);
        auto td = solve_system_td(sys, build_primal(sys), band_td(50));
        auto dense = gaussian_dense(sys);
        ASSERT_EQ(td.outcome.status, SolveStatus::Unique);
        ASSERT_EQ(dense.outcome.status, SolveStatus::Unique);
        EXPECT_LE(oracle::max_abs_diff(td.outcome.assignment, dense.outcome.assignment), 1e-8);
        EXPECT_LE(oracle::max_abs_diff(td.outcome.assignment, oracle::dense_solve(sys)), 1e-8);
    }
}

TEST(SolveSystemTd, RejectsNonDecomposition) {
    auto sys = tridiagonal(5, 1);
    TreeDecomposition td({{0, 1}, {2, 3, 4}}, {{0, 1}});
    EXPECT_THROW(solve_system_td(sys, build_primal(sys), td), InvalidInput);
}

TEST(SolvePinned, SymmetricAndCyclicChains) {
    // Stationarity of the symmetric 2-state chain: pi_0 = 0.5 pi_0 + 0.5 pi_1, and the same for pi_1.
    LinearSystem sym{2, {eq({{0, -0.5}, {1, 0.5}}, 0), eq({{0, 0.5}, {1, -0.5}}, 0)}};
    TreeDecomposition td2({{0, 1}}, {});
    auto x = solve_pinned_homogeneous(sym, build_primal(sym), td2, 0);
    EXPECT_NEAR(x[0], 1.0, 1e-15);
    EXPECT_NEAR(x[1], 1.0, 1e-15);

    LinearSystem cyc{3, {eq({{0, 1}, {2, -1}}, 0), eq({{1, 1}, {0, -1}}, 0), eq({{2, 1}, {1, -1}}, 0)}};
    TreeDecomposition td3({{0, 1, 2}}, {});
    auto y = solve_pinned_homogeneous(cyc, build_primal(cyc), td3, 0);
    for (double v : y) EXPECT_NEAR(v, 1.0, 1e-15);
}

TEST(SolvePinned, RandomErgodicMatchesPowerIteration) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto rc = oracle::random_chain(8, 3, seed, 0, 0, true);
        auto lim = limiting_distribution(rc.mc, nullptr);
        auto power = oracle::power_stationary(rc.mc, 100000);
        double dot = 0, na = 0, nb = 0;
        for (std::size_t i = 0; i < power.size(); ++i) {
            dot += lim.vertex_weight[i] * power[i];
            na += lim.vertex_weight[i] * lim.vertex_weight[i];
            nb += power[i] * power[i];
        }
        EXPECT_LE(1 - dot / std::sqrt(na * nb), 1e-8);
    }
}

TEST(GaussianDense, IdentitySingularAndLimits) {
    LinearSystem id{3, {eq({{0, 1}}, 4), eq({{1, 1}}, -2), eq({{2, 1}}, 0.5)}};
    auto sol = gaussian_dense(id);
    ASSERT_EQ(sol.outcome.status, SolveStatus::Unique);
    EXPECT_EQ(sol.outcome.assignment, (std::vector<double>{4, -2, 0.5}));

    LinearSystem sing{2, {eq({{0, 1}, {1, 1}}, 1), eq({{0, 2}, {1, 2}}, 2)}};
    EXPECT_EQ(gaussian_dense(sing).outcome.status, SolveStatus::Underdetermined);
    auto unsat = read_ls_file(TWMC_TEST_DATA "/unsat.ls");
    EXPECT_EQ(gaussian_dense(unsat).outcome.status, SolveStatus::Unsatisfiable);

    DenseOptions small;
    small.dense_limit = 2;
    EXPECT_THROW(gaussian_dense(id, small), LimitExceeded);
}

TEST(GaussianDense, AgreesWithTdOnSmallIntegerSystems) {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> coef(-5, 5), size(1, 6);
    for (int trial = 0; trial < 100; ++trial) {
        Vertex n = size(rng);
        LinearSystem sys{n, {}};
        int m = size(rng);
        for (int i = 0; i < m; ++i) {
            Equation e;
            for (Vertex v = 0; v < n; ++v) {
                int c = coef(rng);
                bool keep = trial % 3 == 0 ? c > 2 : c != 0;
                if (keep) e.terms.push_back({v, static_cast<double>(c)});
            }
            e.rhs = coef(rng);
            sys.equations.push_back(e);
        }
        auto primal = build_primal(sys);
        auto td = heuristic_decompose(n, primal.edges, Heuristic::MinFill);
        auto a = solve_system_td(sys, primal, td);
        auto b = gaussian_dense(sys);
        auto exact = oracle::rational_classify(sys);
        EXPECT_EQ(static_cast<int>(a.outcome.status), static_cast<int>(exact.kind)) << trial;
        EXPECT_EQ(static_cast<int>(b.outcome.status), static_cast<int>(exact.kind)) << trial;
        if (exact.kind == oracle::Kind::Unique && a.outcome.status == SolveStatus::Unique) {
            EXPECT_LE(oracle::max_abs_diff(a.outcome.assignment, exact.solution), 1e-8);
        }
    }
}

TEST(MaxResidual, Basic) {
    LinearSystem s{2, {eq({{0, 1}, {1, 1}}, 3)}};
    EXPECT_DOUBLE_EQ(max_residual(s, {1, 1}), 1.0);
    EXPECT_EQ(max_residual(s, {1, 2}), 0.0);
}
