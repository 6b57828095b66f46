#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "twmc/linsys.hpp"
#include "twmc/model.hpp"
#include "twmc/tree_decomposition.hpp"

namespace twmc {

/// Shortest decimal text that parses back to exactly x.
std::string format_double(double x);

struct McFile {
    MarkovChain chain;
    std::vector<Vertex> targets;  // from T lines; empty if none
    std::optional<double> lambda;  // from an L line
};

struct MdpFile {
    MarkovDecisionProcess mdp;
    std::vector<Vertex> targets;
    std::optional<double> lambda;
};

// Readers throw InvalidInput naming the offending line.
McFile read_mc(std::istream& in);
MdpFile read_mdp(std::istream& in);
/// Also checks that the declared width matches the bags.
TreeDecomposition read_td(std::istream& in);
LinearSystem read_ls(std::istream& in);

McFile read_mc_file(const std::string& path);
MdpFile read_mdp_file(const std::string& path);
TreeDecomposition read_td_file(const std::string& path);
LinearSystem read_ls_file(const std::string& path);

void write_mc(std::ostream& out, const MarkovChain& mc, const std::vector<Vertex>& targets = {},
              std::optional<double> lambda = std::nullopt);
void write_mdp(std::ostream& out, const MarkovDecisionProcess& mdp, const std::vector<Vertex>& targets = {},
               std::optional<double> lambda = std::nullopt);
void write_td(std::ostream& out, const TreeDecomposition& td);
void write_ls(std::ostream& out, const LinearSystem& sys);

void write_file(const std::string& path, const std::string& content);

}  // namespace twmc
