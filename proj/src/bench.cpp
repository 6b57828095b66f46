#include "twmc/bench.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <ostream>
#include <thread>

#include "twmc/discounted.hpp"
#include "twmc/generator.hpp"
#include "twmc/hitting.hpp"
#include "twmc/io.hpp"
#include "twmc/linsys.hpp"
#include "twmc/mdp_solvers.hpp"
#include "twmc/mean_payoff.hpp"

namespace twmc {

const std::vector<std::string>& bench_methods() {
    static const std::vector<std::string> methods{
        "hitting-td",     "hitting-simple",    "hitting-dense",     "discounted-td",
        "discounted-simple", "discounted-dense", "meanpayoff-td",     "hitting-si-td",
        "hitting-si-simple", "hitting-vi",      "discounted-si-td",  "discounted-si-simple",
        "discounted-vi"};
    return methods;
}

namespace {

namespace fs = std::filesystem;

std::string objective_of(const std::string& method) {
    return method.substr(0, method.find('-'));
}

MarkovDecisionProcess as_mdp(const MarkovChain& mc) {
    std::vector<Owner> owners(mc.vertex_count(), Owner::Probabilistic);
    auto edges = mc.edges();
    return MarkovDecisionProcess(std::move(owners), edges);
}

}  // namespace

std::vector<BenchInstance> load_suite(const std::string& dir) {
    std::vector<fs::path> models;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const auto ext = entry.path().extension();
        if (entry.is_regular_file() && (ext == ".mc" || ext == ".mdp")) {
            auto td = entry.path();
            td.replace_extension(".td");
            if (fs::exists(td)) {
                models.push_back(entry.path());
            }
        }
    }
    std::sort(models.begin(), models.end());
    std::vector<BenchInstance> suite;
    for (const auto& path : models) {
        BenchInstance inst;
        inst.name = path.filename().string();
        if (path.extension() == ".mdp") {
            MdpFile f = read_mdp_file(path.string());
            inst.mdp = std::move(f.mdp);
            inst.is_mdp = true;
            inst.targets = std::move(f.targets);
            inst.lambda = f.lambda;
        } else {
            McFile f = read_mc_file(path.string());
            inst.mdp = as_mdp(f.chain);
            inst.targets = std::move(f.targets);
            inst.lambda = f.lambda;
        }
        auto td = path;
        td.replace_extension(".td");
        inst.td = read_td_file(td.string());
        suite.push_back(std::move(inst));
    }
    return suite;
}

BenchRow run_method(const BenchInstance& inst, const std::string& method, double timeout_secs) {
    BenchRow row;
    row.instance = inst.name;
    row.n = inst.mdp.vertex_count();
    row.m = inst.mdp.edge_count();
    row.width = inst.td.width();
    row.method = method;
    row.objective = objective_of(method);
    row.status = "ok";

    try {
        if (std::find(bench_methods().begin(), bench_methods().end(), method) == bench_methods().end()) {
            throw InvalidInput("unknown method " + method);
        }
        const MarkovChain mc = to_mc(inst.mdp);
        std::optional<TargetSet> targets;
        if (row.objective == "hitting") {
            if (inst.targets.empty()) throw InvalidInput("instance has no targets");
            targets = TargetSet(inst.targets, row.n);
        }
        DiscountedSpec spec;
        if (row.objective == "discounted") {
            if (!inst.lambda) throw InvalidInput("instance has no discount factor");
            spec.lambda = *inst.lambda;
        }

        const auto started = Clock::now();
        const auto deadline = started + std::chrono::duration_cast<Clock::duration>(
                                            std::chrono::duration<double>(timeout_secs));
        SolveOptions opts;
        opts.deadline = deadline;
        SolverReport report;
        if (method == "hitting-td") {
            report = solve_hitting_td(mc, *targets, inst.td, opts).report;
        } else if (method == "hitting-simple") {
            report = solve_hitting_simple(mc, *targets, opts).report;
        } else if (method == "hitting-dense" || method == "discounted-dense") {
            LinearSystem sys = method == "hitting-dense" ? hitting_system(mc, *targets) : discounted_system(mc, spec);
            DenseOptions dense;
            dense.deadline = deadline;
            report = gaussian_dense(sys, dense).report;
        } else if (method == "discounted-td") {
            report = solve_discounted_td(mc, spec, inst.td, opts).report;
        } else if (method == "discounted-simple") {
            report = solve_discounted_simple(mc, spec, opts).report;
        } else if (method == "meanpayoff-td") {
            report = solve_mean_payoff(mc, inst.td, opts).report;
        } else if (method.find("-vi") != std::string::npos) {
            Objective obj = targets ? Objective{HittingObjective{*targets}} : Objective{DiscountedObjective{spec}};
            ViOptions vi;
            vi.deadline = deadline;
            report = value_iteration(inst.mdp, obj, vi);
        } else {
            Objective obj = targets ? Objective{HittingObjective{*targets}} : Objective{DiscountedObjective{spec}};
            SiOptions si;
            si.solve = opts;
            si.evaluator = method.ends_with("-td") ? Evaluator::TreeDecomposition : Evaluator::Simple;
            report = strategy_iteration(inst.mdp, obj, &inst.td, si);
        }
        row.seconds = std::chrono::duration<double>(Clock::now() - started).count();
        row.work = report.work_counter;
        row.kappa = report.kappa;
        if (!report.converged) {
            row.status = "not-converged";
        }
    } catch (const Timeout&) {
        row.seconds = timeout_secs;
        row.status = "timeout";
    } catch (const LimitExceeded&) {
        row.status = "limit";
    } catch (const std::exception& e) {
        std::string msg = e.what();
        std::replace(msg.begin(), msg.end(), ',', ';');
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        row.status = "error: " + msg;
    }
    return row;
}

std::vector<BenchRow> run_bench(const std::vector<BenchInstance>& suite, const BenchOptions& options) {
    const std::vector<std::string>& methods = options.methods.empty() ? bench_methods() : options.methods;
    std::vector<BenchRow> rows(suite.size() * methods.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < suite.size(); i = next++) {
            for (std::size_t j = 0; j < methods.size(); ++j) {
                rows[i * methods.size() + j] = run_method(suite[i], methods[j], options.timeout_secs);
            }
        }
    };
    const int jobs = std::max(1, options.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int k = 0; k < jobs; ++k) {
            pool.emplace_back(worker);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    return rows;
}

std::vector<BenchRow> run_bench(const std::string& dir, const BenchOptions& options) {
    return run_bench(load_suite(dir), options);
}

void write_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
    out << "instance,n,m,width,method,objective,seconds,work,kappa,status\n";
    for (const auto& r : rows) {
        out << r.instance << ',' << r.n << ',' << r.m << ',' << r.width << ',' << r.method << ',' << r.objective
            << ',' << format_double(r.seconds) << ',' << r.work << ',' << r.kappa << ',' << r.status << '\n';
    }
}

}  // namespace twmc
