// vortexsol: ring-profiled vortex soliton solver.
//
//   vortexsol solve  --n0 500 --m 1 --R 40
//   vortexsol direct --lambda 0.1
//   vortexsol bounds --m 1 --R 40 --n0 500
//   vortexsol sweep  --table photon --jobs 4 --out results
//
// Flags override values from --config, which override built-in defaults.

#include "vortexsol/bounds.hpp"
#include "vortexsol/errors.hpp"
#include "vortexsol/runner.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

using namespace vortexsol;

namespace {

struct FlagSet {
    std::map<std::string, std::optional<std::string>> values;
    std::optional<std::string> config_path;
};

void add_flags(CLI::App* sub, FlagSet& flags)
{
    static const std::vector<std::pair<std::string, std::string>> kFlags = {
        {"n0", "prescribed photon number N0"},
        {"lambda", "nonlinear frequency shift (direct mode)"},
        {"m", "topological charge"},
        {"R", "domain radius"},
        {"basis", "number of basis functions"},
        {"panels", "quadrature panels"},
        {"order", "Gauss points per panel"},
        {"seed", "seed for random initialization"},
        {"init", "initial guess: tent|mode1|random"},
        {"tol", "projected-gradient tolerance"},
        {"max-iters", "iteration cap"},
        {"jobs", "sweep worker threads"},
        {"table", "sweep table: photon|charge"},
        {"out", "output directory"},
    };
    for (const auto& [name, help] : kFlags) {
        sub->add_option("--" + name, flags.values[name], help);
    }
    sub->add_option("--config", flags.config_path, "flat key = value config file");
}

RunConfig effective_config(RunMode mode, const FlagSet& flags)
{
    RunConfig cfg;
    if (flags.config_path) {
        apply_config_file(cfg, *flags.config_path);
    }
    for (const auto& [name, value] : flags.values) {
        if (value) {
            apply_setting(cfg, name == "max-iters" ? "max_iters" : name, *value);
        }
    }
    cfg.mode = mode;
    return cfg;
}

void print_record(const ResultRecord& rec)
{
    if (rec.solution) {
        const auto& s = *rec.solution;
        std::printf("lambda = %.6f  A_max = %.6f  N0 = %.6g  J = %.8g  I = %.8g\n", s.lambda,
                    s.A_max, s.N0, s.J_value, s.I_value);
        std::printf("iterations = %d (%s)  residual_weak = %.3e  positivity_ok = %s  bounds_ok = %s\n",
                    s.iterations, s.stop_reason.c_str(), s.residual_weak,
                    s.positivity_ok ? "true" : "false", s.bounds_ok ? "true" : "false");
        if (s.mode == SolveMode::direct) {
            std::printf("trivial = %s\n", s.trivial ? "true (collapsed to A = 0)" : "false");
        }
    }
    if (!rec.error.empty()) {
        std::fprintf(stderr, "error: %s\n", rec.error.c_str());
    }
    if (!rec.record_path.empty()) {
        std::printf("record: %s\n", rec.record_path.c_str());
    }
}

void warn_direct_region(const RunConfig& cfg)
{
    const double lambda = *cfg.params.lambda;
    try {
        const auto region = direct_existence_region(lambda, cfg.params.m, 1.0);
        if (cfg.params.R < region.R_min_theorem) {
            std::fprintf(stderr,
                         "warning: R = %g is below the direct-existence radius R_min = %.4f; "
                         "existence of a nontrivial minimizer is not guaranteed\n",
                         cfg.params.R, region.R_min_theorem);
        }
    } catch (const DomainError&) {
        std::fprintf(stderr,
                     "warning: lambda = %g is outside the direct-existence range (0, %.6f); "
                     "the minimizer may be trivial\n",
                     lambda, 1.5 * find_k_max().k_max);
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Ring-profiled vortex soliton solver"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    FlagSet solve_flags, direct_flags, bounds_flags, sweep_flags;
    auto* solve = app.add_subcommand("solve", "constrained minimization at prescribed N0");
    auto* direct = app.add_subcommand("direct", "direct minimization of the action at prescribed lambda");
    auto* bounds = app.add_subcommand("bounds", "analytic bounds and predicates");
    auto* sweep = app.add_subcommand("sweep", "reference table sweeps (photon or charge)");
    add_flags(solve, solve_flags);
    add_flags(direct, direct_flags);
    add_flags(bounds, bounds_flags);
    add_flags(sweep, sweep_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitParse;
    }

    try {
        if (solve->parsed()) {
            const auto rec = run_solve(effective_config(RunMode::solve, solve_flags));
            print_record(rec);
            return rec.exit_code;
        }
        if (direct->parsed()) {
            const RunConfig cfg = effective_config(RunMode::direct, direct_flags);
            if (!cfg.params.lambda) {
                throw ParameterError("direct: --lambda is required");
            }
            warn_direct_region(cfg);
            const auto rec = run_direct(cfg);
            print_record(rec);
            return rec.exit_code;
        }
        if (bounds->parsed()) {
            const auto rec = run_bounds(effective_config(RunMode::bounds, bounds_flags));
            std::cout << bounds_to_text(*rec.bounds);
            std::cout << bounds_to_json(*rec.bounds).dump(2) << "\n";
            if (!rec.record_path.empty()) {
                std::cout << "record: " << rec.record_path << "\n";
            }
            return kExitOk;
        }
        if (sweep->parsed()) {
            const auto res = run_sweep(effective_config(RunMode::sweep, sweep_flags));
            std::cout << res.summary_csv;
            for (const auto& cell : res.cells) {
                if (!cell.error.empty()) {
                    std::fprintf(stderr, "cell %s: %s\n", cell.cell_label.c_str(), cell.error.c_str());
                }
            }
            if (!res.summary_path.empty()) {
                std::cout << "summary: " << res.summary_path << "\n";
            }
            return res.exit_code;
        }
    } catch (const ParameterError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitParse;
    } catch (const DomainError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitParse;
    } catch (const ConditioningError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConvergence;
    }
    return kExitParse;
}
