#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "twmc/model.hpp"

using namespace twmc;

namespace {

bool has_rule(const std::vector<Violation>& vs, const std::string& rule) {
    return std::any_of(vs.begin(), vs.end(), [&](const Violation& v) { return v.rule == rule; });
}

}  // namespace

TEST(Adjacency, SortsSuccessorsAndFindsEdges) {
    std::vector<Edge> edges = {{0, 2, 0.25, 1}, {0, 1, 0.75, 2}, {1, 1, 1, 0}, {2, 0, 1, 0}};
    Adjacency adj(3, edges);
    ASSERT_EQ(adj.edge_count(), 4u);
    auto s = adj.successors(0);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s[0].dst, 1);
    EXPECT_EQ(s[1].dst, 2);
    ASSERT_NE(adj.find(0, 2), nullptr);
    EXPECT_DOUBLE_EQ(adj.find(0, 2)->reward, 1.0);
    EXPECT_EQ(adj.find(2, 1), nullptr);
}

TEST(Adjacency, RejectsBadEdges) {
    std::vector<Edge> out_of_range = {{0, 3, 1, 0}};
    EXPECT_THROW(Adjacency(2, out_of_range), InvalidInput);
    std::vector<Edge> repeated = {{0, 1, 0.5, 0}, {0, 1, 0.5, 0}};
    EXPECT_THROW(Adjacency(2, repeated), InvalidInput);
    std::vector<Edge> nan = {{0, 1, std::nan(""), 0}};
    EXPECT_THROW(Adjacency(2, nan), InvalidInput);
}

TEST(ValidateMc, FlagsRowSumsAndDeadEnds) {
    std::vector<Edge> edges = {{0, 1, 0.6, 0}, {0, 0, 0.3, 0}};
    MarkovChain mc(2, edges);
    auto v = validate_mc(mc, true);
    // Vertex 0 sums to 0.9 and vertex 1 has no successor at all.
    EXPECT_EQ(v.size(), 2u);
    EXPECT_TRUE(has_rule(v, "row-sum"));

    std::vector<Edge> ok = {{0, 1, 0.5, 0}, {0, 0, 0.5, 0}, {1, 1, 1, 0}};
    EXPECT_TRUE(validate_mc(MarkovChain(2, ok), true).empty());
}

TEST(ValidateMc, GeneralizedChainsAllowAnyWeight) {
    std::vector<Edge> edges = {{0, 1, 2.5, 0}, {1, 0, -1.0, 0}};
    MarkovChain mc(2, edges, false);
    EXPECT_TRUE(validate_mc(mc, false).empty());
    EXPECT_FALSE(validate_mc(mc, true).empty());
}

TEST(Mdp, PlayerWeightsAreIgnoredAndInduceKeepsChoice) {
    std::vector<Edge> edges = {{0, 1, 0.9, 3}, {0, 2, 0.1, 4}, {1, 1, 1, 0}, {2, 2, 1, 0}};
    MarkovDecisionProcess mdp({Owner::Player1, Owner::Probabilistic, Owner::Probabilistic}, edges);
    EXPECT_EQ(mdp.player_count(), 1u);
    EXPECT_DOUBLE_EQ(mdp.find(0, 1)->weight, 0.0);
    EXPECT_TRUE(validate_mdp(mdp).empty());

    Strategy sigma{{2, kNoVertex, kNoVertex}};
    MarkovChain mc = induce_mc(mdp, sigma);
    ASSERT_EQ(mc.successors(0).size(), 1u);
    EXPECT_EQ(mc.successors(0)[0].dst, 2);
    EXPECT_DOUBLE_EQ(mc.successors(0)[0].weight, 1.0);
    EXPECT_DOUBLE_EQ(mc.successors(0)[0].reward, 4.0);
}

TEST(TargetSet, SortsAndValidates) {
    TargetSet t({3, 1}, 4);
    EXPECT_EQ(t.vertices(), (std::vector<Vertex>{1, 3}));
    EXPECT_TRUE(t.contains(3));
    EXPECT_FALSE(t.contains(2));
    EXPECT_THROW(TargetSet({}, 4), InvalidInput);
    EXPECT_THROW(TargetSet({4}, 4), InvalidInput);
}

TEST(Restriction, DropsVerticesThatCannotReachTargets) {
    // 0 -> {1, 2}, 1 -> target 3, 2 is a trap.
    std::vector<Edge> edges = {{0, 1, 0.5, 0}, {0, 2, 0.5, 0}, {1, 3, 1, 0}, {2, 2, 1, 0}, {3, 3, 1, 0}};
    MarkovChain mc(4, edges);
    auto r = remove_non_coreachable(mc, TargetSet({3}, 4));
    EXPECT_EQ(r.removed, (std::vector<Vertex>{2}));
    EXPECT_EQ(r.chain.vertex_count(), 3);
    EXPECT_EQ(r.to_restricted[2], kNoVertex);
    EXPECT_EQ(r.to_original[r.to_restricted[3]], 3);
    EXPECT_EQ(r.chain.successors(r.to_restricted[0]).size(), 1u);
}

TEST(Skeleton, UndirectedWithoutLoops) {
    std::vector<Edge> edges = {{0, 1, 0.5, 0}, {0, 0, 0.5, 0}, {1, 0, 1, 0}};
    auto sk = skeleton(MarkovChain(2, edges));
    ASSERT_EQ(sk.size(), 1u);
    EXPECT_EQ(sk[0], (std::pair<Vertex, Vertex>{0, 1}));
}
