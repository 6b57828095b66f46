#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "twmc/io.hpp"
#include "twmc/model.hpp"
#include "twmc/tree_decomposition.hpp"

using namespace twmc;

namespace {

TreeDecomposition example9_td() { return read_td_file(TWMC_TEST_DATA "/example9.td"); }
MarkovChain example9_mc() { return read_mc_file(TWMC_TEST_DATA "/example9.mc").chain; }

}  // namespace

TEST(TreeDecomposition, WidthAndContains) {
    TreeDecomposition td({{2, 0, 1}, {1, 3}}, {{0, 1}});
    EXPECT_EQ(td.width(), 2);
    EXPECT_EQ(td.bag(0), (std::vector<Vertex>{0, 1, 2}));
    EXPECT_TRUE(td.contains(1, 3));
    EXPECT_FALSE(td.contains(1, 0));
    EXPECT_EQ(td.vertex_bound(), 4);
    EXPECT_EQ(TreeDecomposition().width(), -1);
}

TEST(ValidateTd, Example9DecompositionIsValid) {
    auto mc = example9_mc();
    auto sk = skeleton(mc);
    auto td = example9_td();
    EXPECT_EQ(td.width(), 2);
    EXPECT_TRUE(validate_td(mc.vertex_count(), sk, td).empty());
}

TEST(ValidateTd, DetectsEachBrokenProperty) {
    std::vector<GraphEdge> path = {{0, 1}, {1, 2}};
    EXPECT_FALSE(validate_td(3, path, TreeDecomposition({{0, 1}}, {})).empty());              // vertex 2 missing
    EXPECT_FALSE(validate_td(3, path, TreeDecomposition({{0, 1}, {2}}, {{0, 1}})).empty());   // edge {1,2}
    EXPECT_FALSE(validate_td(3, path, TreeDecomposition({{0, 1}, {1, 2}}, {})).empty());      // not a tree
    EXPECT_FALSE(
        validate_td(3, path, TreeDecomposition({{0, 1}, {2}, {1, 2}}, {{0, 1}, {1, 2}})).empty());  // 1 split
    EXPECT_TRUE(validate_td(3, path, TreeDecomposition({{0, 1}, {1, 2}}, {{0, 1}})).empty());
}

TEST(HeuristicDecompose, ProducesValidDecompositions) {
    for (auto h : {Heuristic::MinDegree, Heuristic::MinFill}) {
        for (std::uint64_t seed = 1; seed <= 30; ++seed) {
            std::mt19937_64 rng(seed);
            auto kt = oracle::random_ktree(40, 3, rng);
            auto td = heuristic_decompose(40, kt.edges, h);
            EXPECT_TRUE(validate_td(40, kt.edges, td).empty()) << seed;
            EXPECT_LE(td.width(), 8);
        }
    }
}

TEST(HeuristicDecompose, HandlesDisconnectedGraphs) {
    std::vector<GraphEdge> edges = {{0, 1}, {2, 3}, {3, 4}};
    auto td = heuristic_decompose(6, edges, Heuristic::MinFill);
    EXPECT_TRUE(validate_td(6, edges, td).empty());
    EXPECT_EQ(td.width(), 1);
}

TEST(Schedule, Example9StartsWithLeafVertexThenItsBag) {
    auto td = example9_td();
    std::vector<Vertex> pinned = {5};
    auto s = schedule(td, pinned);
    EXPECT_EQ(s.root, 0);
    ASSERT_GE(s.steps.size(), 2u);
    EXPECT_EQ(s.steps[0], (ScheduleStep{ScheduleStep::Kind::EliminateVertex, 1, 8}));
    EXPECT_EQ(s.steps[1], (ScheduleStep{ScheduleStep::Kind::RemoveBag, 1, kNoVertex}));
    EXPECT_TRUE(audit_schedule(td, s, pinned).empty());
    std::size_t eliminated = 0;
    for (const auto& st : s.steps) eliminated += st.kind == ScheduleStep::Kind::EliminateVertex;
    EXPECT_EQ(eliminated, 8u);
}

TEST(Schedule, RootMustHoldAllPinned) {
    auto td = example9_td();
    std::vector<Vertex> apart = {0, 8};
    EXPECT_THROW(schedule(td, apart), InvalidInput);
    EXPECT_EQ(schedule(td, {}).root, 0);
}

TEST(Schedule, AuditCatchesTamperedOrder) {
    auto td = example9_td();
    std::vector<Vertex> pinned = {5};
    auto s = schedule(td, pinned);
    std::swap(s.steps[0], s.steps[1]);
    EXPECT_FALSE(audit_schedule(td, s, pinned).empty());
}

TEST(Transform, AddToAllBagsAndRemap) {
    auto td = example9_td();
    auto plus = add_to_all_bags(td, 9);
    for (BagId b = 0; b < plus.bag_count(); ++b) EXPECT_TRUE(plus.contains(b, 9));
    std::vector<Vertex> map(9);
    for (Vertex v = 0; v < 9; ++v) map[v] = v == 8 ? kNoVertex : v;
    auto removed = remap_vertices(td, map);
    EXPECT_EQ(removed.bag(1), (std::vector<Vertex>{6}));
}

TEST(ValidateTd, SingleBagAndMissingBag) {
    std::vector<GraphEdge> tri = {{0, 1}, {1, 2}, {0, 2}};
    auto one = TreeDecomposition({{0, 1, 2}}, {});
    EXPECT_TRUE(validate_td(3, tri, one).empty());
    EXPECT_EQ(one.width(), 2);

    // Example decomposition without the bag {2,3,5}.
    auto mc = example9_mc();
    auto sk = skeleton(mc);
    TreeDecomposition cut({{1, 2, 5}, {6, 8}, {3, 5, 6}, {0, 1, 2}, {1, 4, 5}, {4, 5, 7}},
                          {{0, 3}, {0, 4}, {2, 1}, {4, 5}});
    auto v = validate_td(mc.vertex_count(), sk, cut);
    EXPECT_FALSE(v.empty());
    bool edge_rule = false;
    for (const auto& x : v) edge_rule |= x.rule == "edge-coverage" || x.rule == "tree-disconnected";
    EXPECT_TRUE(edge_rule);
}

TEST(HeuristicDecompose, PathAndClique) {
    std::vector<GraphEdge> path;
    for (Vertex v = 0; v + 1 < 10; ++v) path.emplace_back(v, v + 1);
    std::vector<GraphEdge> clique;
    for (Vertex u = 0; u < 5; ++u)
        for (Vertex v = u + 1; v < 5; ++v) clique.emplace_back(u, v);
    for (auto h : {Heuristic::MinDegree, Heuristic::MinFill}) {
        auto p = heuristic_decompose(10, path, h);
        EXPECT_EQ(p.width(), 1);
        EXPECT_TRUE(validate_td(10, path, p).empty());
        auto c = heuristic_decompose(5, clique, h);
        EXPECT_EQ(c.width(), 4);
        EXPECT_TRUE(validate_td(5, clique, c).empty());
    }
}

TEST(Schedule, SingleBagEliminatesTheOther) {
    TreeDecomposition td({{0, 1}}, {});
    std::vector<Vertex> pinned = {1};
    auto s = schedule(td, pinned);
    ASSERT_EQ(s.steps.size(), 1u);
    EXPECT_EQ(s.steps[0], (ScheduleStep{ScheduleStep::Kind::EliminateVertex, 0, 0}));
}

TEST(Transform, AddToAllBagsWidth) {
    auto td = example9_td();
    EXPECT_EQ(add_to_all_bags(td, 9).width(), 3);
    auto twice = add_to_all_bags(add_to_all_bags(td, 9), 9);
    EXPECT_EQ(twice.width(), 3);
    auto mc = example9_mc();
    auto sk = skeleton(mc);
    EXPECT_TRUE(validate_td(10, sk, add_to_all_bags(td, 9)).empty());
}
