// command-line front door: load a case directory, run one of the analyses,
// write machine-readable results under --out.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <thread>

#include "lced/errors.hpp"
#include "lced/io.hpp"
#include "lced/util.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

enum ExitCode { kOk = 0, kDataError = 1, kInfeasible = 2, kNumerical = 3, kNoConvergence = 4 };

void print_error(int code, const std::string& kind, const std::string& message) {
    ordered_json j;
    j["error"] = {{"code", code}, {"kind", kind}, {"message", message}};
    lced::write_json(j, std::cerr, 0);
}

void print_warnings(const lced::CaseData& c) {
    for (const auto& w : c.warnings) std::cerr << "warning: " << w << "\n";
}

struct CommonOpts {
    std::string case_dir;
    std::string out_dir = ".";
    int workers = static_cast<int>(std::thread::hardware_concurrency());
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--case", opts.case_dir, "case directory")->required();
    cmd->add_option("--out", opts.out_dir, "output directory (created if absent)");
    cmd->add_option("--workers", opts.workers, "worker threads for independent solves");
}

lced::Norms resolve_norms(const lced::CaseData& c, bool raw, int workers,
                          lced::NashProblem* problem_out = nullptr) {
    if (raw) return {};
    lced::NashProblem p = lced::disagreement_points(c, workers);
    if (problem_out) *problem_out = p;
    return {p.cost_norm, p.emission_norm};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-objective (cost, emissions) dispatch over a DC network: weighted-sum\n"
                 "frontier scans, exact parametric frontiers and the bargaining-equilibrium\n"
                 "weight search"};
    app.require_subcommand(1);

    CommonOpts solve_opts, frontier_opts, nash_opts, regions_opts;
    double solve_lambda = 0.5;
    bool solve_raw = false;
    int frontier_grid = 21;
    bool frontier_exact = false, frontier_raw = false;
    double eps1_rel = 1e-4, eps2 = 0.02;
    int max_iters = 50;
    std::string convergence_mode = "both";
    bool no_refine = false;
    int regions_period = 0;
    bool regions_raw = false;
    std::string seed_name;
    std::string seed_out = ".";

    auto* solve_cmd = app.add_subcommand("solve", "single weighted dispatch solve");
    add_common(solve_cmd, solve_opts);
    solve_cmd->add_option("--lambda", solve_lambda, "cost weight in [0,1]")
        ->check(CLI::Range(0.0, 1.0));
    solve_cmd->add_flag("--raw", solve_raw, "objective without endpoint normalization");

    auto* frontier_cmd = app.add_subcommand("frontier", "Pareto frontier scan");
    add_common(frontier_cmd, frontier_opts);
    frontier_cmd->add_option("--grid", frontier_grid, "number of weight grid points")
        ->check(CLI::Range(2, 1000000));
    frontier_cmd->add_flag("--exact", frontier_exact,
                           "also enumerate the exact piecewise frontier");
    frontier_cmd->add_flag("--raw", frontier_raw, "objective without endpoint normalization");

    auto* nash_cmd = app.add_subcommand("nash", "bargaining-equilibrium weight search");
    add_common(nash_cmd, nash_opts);
    nash_cmd->add_option("--eps1-rel", eps1_rel, "relative gap tolerance on the two best F");
    nash_cmd->add_option("--eps2", eps2, "absolute tolerance on the weight-ratio gap");
    nash_cmd->add_option("--max-iters", max_iters, "bisection iteration cap");
    nash_cmd->add_option("--convergence-mode", convergence_mode, "both | either")
        ->check(CLI::IsMember({"both", "either"}));
    nash_cmd->add_flag("--no-refine", no_refine, "skip segment refinement");

    auto* regions_cmd = app.add_subcommand("regions", "critical regions of one period");
    add_common(regions_cmd, regions_opts);
    regions_cmd->add_option("--period", regions_period, "period index");
    regions_cmd->add_flag("--raw", regions_raw, "objective without endpoint normalization");

    auto* seed_cmd = app.add_subcommand("seed-case", "write a built-in demo case");
    seed_cmd->add_option("name", seed_name, "toyA | toyB | toyC")->required();
    seed_cmd->add_option("--out", seed_out, "target directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::string msg = e.what();
        print_error(kDataError, "data", "argument error: " + msg);
        return kDataError;
    }

    try {
        if (seed_cmd->parsed()) {
            lced::save_case(lced::builtin_case(seed_name), seed_out);
            return kOk;
        }

        if (solve_cmd->parsed()) {
            auto c = lced::load_case(solve_opts.case_dir);
            print_warnings(c);
            fs::create_directories(solve_opts.out_dir);
            lced::Norms norms = resolve_norms(c, solve_raw, solve_opts.workers);
            auto hd = lced::solve_horizon(c, solve_lambda, norms, solve_opts.workers);
            lced::write_json_file(lced::solve_result_json(hd, solve_lambda, norms),
                                  fs::path(solve_opts.out_dir) / "result.json");
            lced::write_dispatch_csv(hd, c, fs::path(solve_opts.out_dir) / "dispatch.csv");
            return kOk;
        }

        if (frontier_cmd->parsed()) {
            auto c = lced::load_case(frontier_opts.case_dir);
            print_warnings(c);
            fs::create_directories(frontier_opts.out_dir);
            lced::Norms norms = resolve_norms(c, frontier_raw, frontier_opts.workers);
            auto points = lced::scan_frontier(c, lced::lambda_grid(frontier_grid), norms,
                                              frontier_opts.workers);
            lced::write_frontier_csv(points, fs::path(frontier_opts.out_dir) / "frontier.csv");
            if (frontier_exact) {
                auto exact = lced::exact_frontier(c, norms);
                lced::write_breakpoints_csv(exact,
                                            fs::path(frontier_opts.out_dir) / "breakpoints.csv");
            }
            return kOk;
        }

        if (nash_cmd->parsed()) {
            auto c = lced::load_case(nash_opts.case_dir);
            print_warnings(c);
            fs::create_directories(nash_opts.out_dir);
            lced::NashConfig cfg;
            cfg.eps1_rel = eps1_rel;
            cfg.eps2 = eps2;
            cfg.max_iters = max_iters;
            cfg.mode = convergence_mode == "either" ? lced::ConvergenceMode::either
                                                    : lced::ConvergenceMode::both;
            cfg.segment_refinement = !no_refine;
            cfg.workers = nash_opts.workers;
            auto [result, trace] = lced::dynamic_weight_search(c, cfg);
            lced::write_json_file(lced::nash_result_json(result),
                                  fs::path(nash_opts.out_dir) / "result.json");
            lced::write_trace_csv(trace, fs::path(nash_opts.out_dir) / "trace.csv");
            if (!result.converged) {
                print_error(kNoConvergence, "convergence",
                            "weight search hit max-iters before meeting the criteria");
                return kNoConvergence;
            }
            return kOk;
        }

        if (regions_cmd->parsed()) {
            auto c = lced::load_case(regions_opts.case_dir);
            print_warnings(c);
            if (regions_period < 0 || regions_period >= c.horizon) {
                print_error(kDataError, "data",
                            "period " + std::to_string(regions_period) + " outside horizon " +
                                std::to_string(c.horizon));
                return kDataError;
            }
            fs::create_directories(regions_opts.out_dir);
            lced::Norms norms = resolve_norms(c, regions_raw, regions_opts.workers);
            auto [lp, vm] = lced::build_period_lp(c, regions_period, 0.5, norms);
            auto [cost_vec, emis_vec] = lced::objective_vectors(c, vm);
            auto form = lced::to_parametric_form(lp, cost_vec / norms.cost,
                                                 emis_vec / norms.emissions);
            auto regions = lced::enumerate_regions(form);
            lced::write_regions_csv(regions, fs::path(regions_opts.out_dir) / "regions.csv");
            return kOk;
        }
    } catch (const lced::DataError& e) {
        print_error(kDataError, "data", e.what());
        return kDataError;
    } catch (const lced::InfeasibleError& e) {
        print_error(kInfeasible, "infeasible", e.what());
        return kInfeasible;
    } catch (const lced::NumericalError& e) {
        print_error(kNumerical, "numerical", e.what());
        return kNumerical;
    } catch (const std::exception& e) {
        print_error(kDataError, "data", e.what());
        return kDataError;
    }
    return kOk;
}
