#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "twmc/model.hpp"
#include "twmc/tree_decomposition.hpp"

namespace twmc {

struct BenchRow {
    std::string instance;
    Vertex n = 0;
    std::size_t m = 0;
    int width = -1;
    std::string method;
    std::string objective;
    double seconds = 0.0;
    std::uint64_t work = 0;
    std::size_t kappa = 0;
    // ok, timeout, limit, or error: <message>
    std::string status;
};

/// Every method name run_bench understands, in CSV order.
const std::vector<std::string>& bench_methods();

/// A loaded suite entry. MC files load as MDPs without Player1 vertices.
struct BenchInstance {
    std::string name;
    MarkovDecisionProcess mdp;
    bool is_mdp = false;
    TreeDecomposition td;
    std::vector<Vertex> targets;
    std::optional<double> lambda;
};

struct BenchOptions {
    std::vector<std::string> methods;  // empty means all
    double timeout_secs = 60.0;
    int jobs = 1;
};

/// Loads every *.mc / *.mdp file in dir that has a matching <stem>.td,
/// sorted by file name.
std::vector<BenchInstance> load_suite(const std::string& dir);

/// Runs one method; parse time is not included in seconds.
BenchRow run_method(const BenchInstance& inst, const std::string& method, double timeout_secs);

/// One row per (instance, method) in instance order, then method order.
std::vector<BenchRow> run_bench(const std::vector<BenchInstance>& suite, const BenchOptions& options);
std::vector<BenchRow> run_bench(const std::string& dir, const BenchOptions& options);

void write_csv(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace twmc
