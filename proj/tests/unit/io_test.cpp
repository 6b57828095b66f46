#include <gtest/gtest.h>

#include <sstream>

#include "oracles.hpp"
#include "twmc/io.hpp"

using namespace twmc;

namespace {

template <class F>
std::string error_of(F f) {
    try {
        f();
    } catch (const InvalidInput& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST(FormatDouble, ShortestRoundTrip) {
    EXPECT_EQ(format_double(0.5), "0.5");
    EXPECT_EQ(format_double(1.0), "1");
    for (double x : {0.1, 1.0 / 3.0, -1234.5678e-200, 6.02214076e23}) {
        EXPECT_EQ(std::stod(format_double(x)), x);
    }
}

TEST(ReadMc, Example9Fixture) {
    auto f = read_mc_file(TWMC_TEST_DATA "/example9.mc");
    EXPECT_EQ(f.chain.vertex_count(), 9);
    EXPECT_EQ(f.chain.edge_count(), 16u);
    EXPECT_EQ(f.targets, (std::vector<Vertex>{5}));
    EXPECT_FALSE(f.lambda.has_value());
}

TEST(RoundTrip, McMdpTdLs) {
    auto rc = oracle::random_chain(20, 3, 1, -5, 5);
    std::ostringstream mc_out;
    write_mc(mc_out, rc.mc, {1, 2}, 0.25);
    std::istringstream mc_in(mc_out.str());
    auto mc_back = read_mc(mc_in);
    EXPECT_TRUE(mc_back.chain == rc.mc);
    EXPECT_EQ(mc_back.targets, (std::vector<Vertex>{1, 2}));
    EXPECT_EQ(mc_back.lambda, 0.25);

    auto rm = oracle::random_mdp(20, 3, 2, 5, 3, -5, 5);
    std::ostringstream mdp_out;
    write_mdp(mdp_out, rm.mdp);
    std::istringstream mdp_in(mdp_out.str());
    EXPECT_TRUE(read_mdp(mdp_in).mdp == rm.mdp);

    std::ostringstream td_out;
    write_td(td_out, rc.td);
    std::istringstream td_in(td_out.str());
    EXPECT_TRUE(read_td(td_in) == rc.td);

    LinearSystem sys{3, {{{{0, 1.5}, {2, -0.1}}, 4}, {{{1, 1}}, 0}}};
    std::ostringstream ls_out;
    write_ls(ls_out, sys);
    std::istringstream ls_in(ls_out.str());
    EXPECT_TRUE(read_ls(ls_in) == sys);
}

TEST(ReadMc, RewardDefaultsAndComments) {
    std::istringstream in("# c\nMC 2 2\nE 0 1 1   # trailing\nE 1 1 1 2.5\n");
    auto f = read_mc(in);
    EXPECT_EQ(f.chain.find(0, 1)->reward, 0.0);
    EXPECT_EQ(f.chain.find(1, 1)->reward, 2.5);
}

TEST(Readers, ReportOffendingLine) {
    auto e1 = error_of([] {
        std::istringstream in("MC 2 2\nE 0 1 1\nE 1 x 1\n");
        read_mc(in);
    });
    EXPECT_NE(e1.find("line 3"), std::string::npos) << e1;

    auto e2 = error_of([] {
        std::istringstream in("MDP 2 2\nV 0 1\nV 1 P\nE 0 1 0.5 0\nE 1 1 1 0\n");
        read_mdp(in);
    });
    EXPECT_NE(e2.find("line 4"), std::string::npos) << e2;

    auto e3 = error_of([] {
        std::istringstream in("TD 1 3\nB 0 0 1\n");
        read_td(in);
    });
    EXPECT_FALSE(e3.empty());

    auto e4 = error_of([] {
        std::istringstream in("LS 1 1\nEQ 2 0 1 1\n");
        read_ls(in);
    });
    EXPECT_FALSE(e4.empty());

    EXPECT_THROW(read_mc_file("/nonexistent/file.mc"), InvalidInput);
}
