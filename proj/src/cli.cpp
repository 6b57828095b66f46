#include "twmc/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "twmc/bench.hpp"
#include "twmc/discounted.hpp"
#include "twmc/generator.hpp"
#include "twmc/hitting.hpp"
#include "twmc/io.hpp"
#include "twmc/linsys.hpp"
#include "twmc/mdp_solvers.hpp"
#include "twmc/mean_payoff.hpp"

namespace twmc {

namespace {

struct Common {
    std::string input;
    std::string td;
    int precision = 12;
    double zero_tol = 1e-12;
    std::uint64_t seed = 1;
    double timeout_secs = 0.0;
};

void add_common(CLI::App* cmd, Common& c, bool needs_input = true) {
    auto* in = cmd->add_option("--input,-i", c.input, "Model, system or decomposition file");
    if (needs_input) {
        in->required()->check(CLI::ExistingFile);
    }
    cmd->add_option("--td", c.td, "Tree decomposition file")->check(CLI::ExistingFile);
    cmd->add_option("--precision", c.precision, "Decimals in printed values (-1: shortest exact form)")
        ->capture_default_str();
    cmd->add_option("--zero-tol", c.zero_tol, "Relative zero threshold for coefficients")->capture_default_str();
    cmd->add_option("--seed", c.seed, "Random seed")->capture_default_str();
    cmd->add_option("--timeout-secs", c.timeout_secs, "Abort after this many seconds (0: no limit)");
}

SolveOptions solve_options(const Common& c) {
    SolveOptions o;
    o.zero_tol = c.zero_tol;
    if (c.timeout_secs > 0.0) {
        o.deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                        std::chrono::duration<double>(c.timeout_secs));
    }
    return o;
}

std::string format_value(double v, int precision) {
    if (precision < 0) {
        return format_double(v);
    }
    char buf[512];
    std::snprintf(buf, sizeof buf, "%.*f", precision, v);
    return buf;
}

void print_values(std::ostream& out, const std::vector<double>& values, int precision) {
    for (std::size_t v = 0; v < values.size(); ++v) {
        out << v << ' ' << format_value(values[v], precision) << '\n';
    }
}

TreeDecomposition td_or_heuristic(const std::string& path, Vertex n, const std::vector<GraphEdge>& edges) {
    if (!path.empty()) {
        return read_td_file(path);
    }
    return heuristic_decompose(n, edges, Heuristic::MinFill);
}

std::vector<Vertex> pick_targets(const std::vector<Vertex>& flag, const std::vector<Vertex>& file) {
    if (!flag.empty()) return flag;
    if (!file.empty()) return file;
    throw InvalidInput("no targets: pass --targets or add a T line to the model");
}

double pick_lambda(const std::optional<double>& flag, const std::optional<double>& file) {
    if (flag) return *flag;
    if (file) return *file;
    throw InvalidInput("no discount factor: pass --lambda or add an L line to the model");
}

std::vector<double> unique_values(const LinsysSolution& sol) {
    if (sol.outcome.status != SolveStatus::Unique) {
        throw NumericalError("dense system has no unique solution");
    }
    return sol.outcome.assignment;
}

bool has_extension(const std::string& path, const std::string& ext) {
    return std::filesystem::path(path).extension() == ext;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Markov chain and MDP solvers for low-treewidth models", "twmc"};
    app.require_subcommand(1);
    std::ostringstream buffer;
    int status = kExitOk;

    Common common;
    std::vector<Vertex> targets;
    std::optional<double> lambda;
    std::string method;
    std::string evaluator = "td";
    std::string strategy_out;
    double epsilon = 1e-10;
    std::size_t max_iters = 1000000;

    auto* hitting = app.add_subcommand("hitting", "Hitting probabilities on a Markov chain");
    add_common(hitting, common);
    hitting->add_option("--targets", targets, "Target vertex ids")->delimiter(',');
    hitting->add_option("--method", method, "td, simple or dense")->check(CLI::IsMember({"td", "simple", "dense"}));

    auto* discounted = app.add_subcommand("discounted", "Expected discounted sums on a Markov chain");
    add_common(discounted, common);
    discounted->add_option("--lambda", lambda, "Discount factor in (0, 1)");
    discounted->add_option("--method", method, "td, simple or dense")
        ->check(CLI::IsMember({"td", "simple", "dense"}));

    auto* meanpayoff = app.add_subcommand("meanpayoff", "Expected mean payoff on a Markov chain");
    add_common(meanpayoff, common);

    auto* linsolve = app.add_subcommand("linsolve", "Solve a linear system");
    add_common(linsolve, common);
    linsolve->add_option("--method", method, "td or dense")->check(CLI::IsMember({"td", "dense"}));

    auto add_mdp = [&](CLI::App* cmd) {
        add_common(cmd, common);
        cmd->add_option("--method", method, "si or vi")->check(CLI::IsMember({"si", "vi"}));
        cmd->add_option("--evaluator", evaluator, "td or simple")->check(CLI::IsMember({"td", "simple"}));
        cmd->add_option("--epsilon", epsilon, "Value iteration stopping threshold");
        cmd->add_option("--max-iters", max_iters, "Value iteration sweep limit");
        cmd->add_option("--strategy-out", strategy_out, "Write the strategy as '<vertex> <choice>' lines");
    };
    auto* mdp_hitting = app.add_subcommand("mdp-hitting", "Maximal hitting probabilities on an MDP");
    add_mdp(mdp_hitting);
    mdp_hitting->add_option("--targets", targets, "Target vertex ids")->delimiter(',');
    auto* mdp_discounted = app.add_subcommand("mdp-discounted", "Maximal discounted sums on an MDP");
    add_mdp(mdp_discounted);
    mdp_discounted->add_option("--lambda", lambda, "Discount factor in (0, 1)");

    auto* validate = app.add_subcommand("validate", "Check a model, system or decomposition");
    add_common(validate, common);

    std::string heuristic = "min-fill";
    std::string out_path;
    auto* decompose = app.add_subcommand("decompose", "Heuristic tree decomposition of a model's skeleton");
    add_common(decompose, common);
    decompose->add_option("--heuristic", heuristic, "min-degree or min-fill")
        ->check(CLI::IsMember({"min-degree", "min-fill"}));
    decompose->add_option("--out", out_path, "Output file (default: standard output)");

    GenConfig gen_cfg;
    std::string kind = "cfg-like";
    std::string td_out;
    auto* gen = app.add_subcommand("gen", "Generate a synthetic instance");
    gen->add_option("--kind", kind, "cfg-like, path, cycle or grid-band")
        ->check(CLI::IsMember({"cfg-like", "path", "cycle", "grid-band"}));
    gen->add_option("--n", gen_cfg.n, "Vertex count")->required();
    gen->add_option("--width", gen_cfg.width_cap, "Width cap")->capture_default_str();
    gen->add_option("--seed", gen_cfg.seed, "Random seed")->capture_default_str();
    gen->add_option("--player-prob", gen_cfg.player_prob, "Probability of a Player1 vertex")->capture_default_str();
    gen->add_option("--out", out_path, "Model file; a .mc extension writes the uniform Markov chain")->required();
    gen->add_option("--td-out", td_out, "Decomposition file")->required();

    BenchOptions bench_opts;
    std::string suite;
    auto* bench = app.add_subcommand("bench", "Time solvers on a directory of instances");
    bench->add_option("--suite", suite, "Directory of model files with matching .td files")
        ->required()
        ->check(CLI::ExistingDirectory);
    bench->add_option("--methods", bench_opts.methods, "Comma-separated method names")->delimiter(',');
    bench->add_option("--out", out_path, "CSV file (default: standard output)");
    bench->add_option("--jobs", bench_opts.jobs, "Parallel workers")->capture_default_str();
    bench->add_option("--timeout-secs", bench_opts.timeout_secs, "Per-run timeout")->capture_default_str();

    std::vector<std::string> argv_store{"twmc"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : argv_store) argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        const SolveOptions opts = solve_options(common);
        if (hitting->parsed() || discounted->parsed() || meanpayoff->parsed()) {
            McFile f = read_mc_file(common.input);
            const MarkovChain& mc = f.chain;
            const std::string m = method.empty() ? "td" : method;
            auto td = [&] { return td_or_heuristic(common.td, mc.vertex_count(), skeleton(mc)); };
            std::vector<double> values;
            if (hitting->parsed()) {
                TargetSet t(pick_targets(targets, f.targets), mc.vertex_count());
                if (m == "td") {
                    values = solve_hitting_td(mc, t, td(), opts).result.prob;
                } else if (m == "simple") {
                    values = solve_hitting_simple(mc, t, opts).result.prob;
                } else {
                    values = unique_values(gaussian_dense(hitting_system(mc, t), {20000, opts.deadline}));
                }
            } else if (discounted->parsed()) {
                DiscountedSpec spec{pick_lambda(lambda, f.lambda)};
                if (m == "td") {
                    values = solve_discounted_td(mc, spec, td(), opts).result.value;
                } else if (m == "simple") {
                    values = solve_discounted_simple(mc, spec, opts).result.value;
                } else {
                    validate_spec(spec);
                    values = unique_values(gaussian_dense(discounted_system(mc, spec), {20000, opts.deadline}));
                }
            } else {
                values = solve_mean_payoff(mc, td(), opts).result.value;
            }
            print_values(buffer, values, common.precision);
        } else if (linsolve->parsed()) {
            LinearSystem sys = read_ls_file(common.input);
            LinsysSolution sol;
            if (method == "dense") {
                sol = gaussian_dense(sys, {20000, opts.deadline});
            } else {
                PrimalGraph primal = build_primal(sys);
                TreeDecomposition td = td_or_heuristic(common.td, sys.unknown_count, primal.edges);
                sol = solve_system_td(sys, primal, td, opts);
            }
            switch (sol.outcome.status) {
                case SolveStatus::Unique:
                    print_values(buffer, sol.outcome.assignment, common.precision);
                    break;
                case SolveStatus::Unsatisfiable:
                    err << "unsatisfiable\n";
                    status = kExitUnsat;
                    break;
                case SolveStatus::Underdetermined:
                    err << "underdetermined\n";
                    status = kExitUnderdetermined;
                    break;
            }
        } else if (mdp_hitting->parsed() || mdp_discounted->parsed()) {
            MdpFile f = read_mdp_file(common.input);
            const MarkovDecisionProcess& mdp = f.mdp;
            Objective objective = mdp_hitting->parsed()
                                      ? Objective{HittingObjective{TargetSet(pick_targets(targets, f.targets),
                                                                             mdp.vertex_count())}}
                                      : Objective{DiscountedObjective{DiscountedSpec{pick_lambda(lambda, f.lambda)}}};
            SolverReport report;
            if (method == "vi") {
                ViOptions vi;
                vi.epsilon = epsilon;
                vi.max_iters = max_iters;
                vi.deadline = opts.deadline;
                report = value_iteration(mdp, objective, vi);
                if (!report.converged) {
                    err << "warning: value iteration stopped after " << report.kappa << " sweeps\n";
                }
            } else {
                SiOptions si;
                si.solve = opts;
                si.evaluator = evaluator == "simple" ? Evaluator::Simple : Evaluator::TreeDecomposition;
                std::optional<TreeDecomposition> td;
                if (si.evaluator == Evaluator::TreeDecomposition) {
                    td = td_or_heuristic(common.td, mdp.vertex_count(), skeleton(mdp));
                }
                report = strategy_iteration(mdp, objective, td ? &*td : nullptr, si);
            }
            print_values(buffer, report.values, common.precision);
            if (!strategy_out.empty()) {
                std::ostringstream s;
                for (Vertex v = 0; v < mdp.vertex_count(); ++v) {
                    if (mdp.owner(v) == Owner::Player1) {
                        s << v << ' ' << report.strategy->choice[v] << '\n';
                    }
                }
                write_file(strategy_out, s.str());
            }
        } else if (validate->parsed()) {
            std::vector<Violation> violations;
            Vertex n = 0;
            std::vector<GraphEdge> edges;
            if (has_extension(common.input, ".mdp")) {
                MdpFile f = read_mdp_file(common.input);
                violations = validate_mdp(f.mdp);
                n = f.mdp.vertex_count();
                edges = skeleton(f.mdp);
            } else if (has_extension(common.input, ".ls")) {
                LinearSystem sys = read_ls_file(common.input);
                violations = validate_system(sys);
                n = sys.unknown_count;
                edges = build_primal(sys).edges;
            } else if (has_extension(common.input, ".td")) {
                TreeDecomposition td = read_td_file(common.input);
                n = td.vertex_bound();
                violations = validate_td(n, {}, td);
            } else {
                McFile f = read_mc_file(common.input);
                violations = validate_mc(f.chain, true);
                n = f.chain.vertex_count();
                edges = skeleton(f.chain);
            }
            if (!common.td.empty()) {
                auto more = validate_td(n, edges, read_td_file(common.td));
                violations.insert(violations.end(), more.begin(), more.end());
            }
            for (const auto& v : violations) {
                err << v.rule << ": " << v.detail << '\n';
            }
            if (!violations.empty()) {
                return kExitError;
            }
            buffer << "ok\n";
        } else if (decompose->parsed()) {
            Vertex n = 0;
            std::vector<GraphEdge> edges;
            if (has_extension(common.input, ".mdp")) {
                MdpFile f = read_mdp_file(common.input);
                n = f.mdp.vertex_count();
                edges = skeleton(f.mdp);
            } else if (has_extension(common.input, ".ls")) {
                LinearSystem sys = read_ls_file(common.input);
                n = sys.unknown_count;
                edges = build_primal(sys).edges;
            } else {
                McFile f = read_mc_file(common.input);
                n = f.chain.vertex_count();
                edges = skeleton(f.chain);
            }
            TreeDecomposition td = heuristic_decompose(
                n, edges, heuristic == "min-degree" ? Heuristic::MinDegree : Heuristic::MinFill);
            std::ostringstream s;
            write_td(s, td);
            if (out_path.empty()) {
                buffer << s.str();
            } else {
                write_file(out_path, s.str());
            }
        } else if (gen->parsed()) {
            gen_cfg.kind = parse_gen_kind(kind);
            Instance inst = generate(gen_cfg);
            std::ostringstream model;
            if (has_extension(out_path, ".mc")) {
                write_mc(model, to_mc(inst.mdp), inst.targets.vertices(), inst.spec.lambda);
            } else {
                write_mdp(model, inst.mdp, inst.targets.vertices(), inst.spec.lambda);
            }
            std::ostringstream td;
            write_td(td, inst.td);
            write_file(out_path, model.str());
            write_file(td_out, td.str());
        } else if (bench->parsed()) {
            for (const auto& m : bench_opts.methods) {
                const auto& known = bench_methods();
                if (std::find(known.begin(), known.end(), m) == known.end()) {
                    throw InvalidInput("unknown bench method '" + m + "'");
                }
            }
            auto rows = run_bench(suite, bench_opts);
            std::ostringstream s;
            write_csv(s, rows);
            if (out_path.empty()) {
                buffer << s.str();
            } else {
                write_file(out_path, s.str());
            }
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }

    out << buffer.str();
    return status;
}

}  // namespace twmc
