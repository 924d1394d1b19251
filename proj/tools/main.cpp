// SPDX-License-Identifier: Apache-2.0

#include "m3dnoc/brute.hpp"
#include "m3dnoc/config.hpp"
#include "m3dnoc/io.hpp"
#include "m3dnoc/sweep.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

namespace fs = std::filesystem;
using namespace m3dnoc;

namespace {

// exit codes: 0 ok, 1 internal error, 2 validation error, 3 infeasible spec
constexpr int kExitInternal = 1;
constexpr int kExitValidation = 2;
constexpr int kExitInfeasible = 3;

struct CommonOpts {
    std::string config_path;
    std::string out_override;
    std::uint64_t seed_override = 0;
    bool seed_set = false;
    int jobs = 0;
};

ExperimentConfig resolve_config(const CommonOpts &opts) {
    ExperimentConfig cfg = load_config(opts.config_path);
    if (opts.seed_set)
        apply_seed_override(cfg, opts.seed_override);
    if (!opts.out_override.empty())
        cfg.out_dir = opts.out_override;
    return cfg;
}

int resolve_jobs(const CommonOpts &opts) {
    if (opts.jobs > 0)
        return opts.jobs;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

int cmd_generate(const ExperimentConfig &cfg) {
    Design d = build_initial_design(cfg, cfg.seed);
    TrafficMatrix tm = build_traffic(cfg);
    fs::create_directories(cfg.out_dir);
    write_topology(cfg.out_dir, d.topology, d.kind);
    write_traffic_csv(cfg.out_dir + "/traffic.csv", tm);
    std::printf("routers: %d\nlinks: %d\nclustering_coefficient: %s\n",
                d.topology.router_count(), d.topology.link_count(),
                fmt_double(clustering_coefficient(d.topology)).c_str());
    std::printf("wrote %s/{meta,routers,links,placement,traffic}.csv\n", cfg.out_dir.c_str());
    return 0;
}

int cmd_evaluate(const ExperimentConfig &cfg, const std::string &design_dir) {
    std::string dir = design_dir.empty() ? cfg.out_dir + "/design_pa" : design_dir;
    Design d = load_design(dir);
    if (d.tiers.stage_tier.empty())
        throw ValidationError("design in '" + dir + "' has no tier assignment files");

    ValidationReport rep = validate_design(d);
    if (!rep.ok) {
        std::fprintf(stderr, "invalid design: %s\n", rep.summary().c_str());
        return kExitValidation;
    }

    TrafficMatrix tm = build_traffic(cfg);
    EvalResult r = evaluate(d, tm, cfg.process, cfg.router);
    std::printf("latency_ps: %s\nenergy_pj: %s\nedp: %s\n", fmt_double(r.latency_ps).c_str(),
                fmt_double(r.energy_pj).c_str(), fmt_double(r.edp).c_str());
    fs::create_directories(cfg.out_dir);
    write_result_csv(cfg.out_dir + "/result.csv", dir, cfg.process, r);
    return 0;
}

int cmd_optimize(const ExperimentConfig &cfg) {
    Design initial = build_initial_design(cfg, cfg.seed);
    TrafficMatrix tm = build_traffic(cfg);
    StageProblem problem{initial, tm, cfg.process, cfg.router};

    OptimizeResult res = stage_optimize(problem, cfg.search);

    fs::create_directories(cfg.out_dir);
    const char *tag = cfg.search.mode == SearchMode::ProcessAware ? "design_pa" : "design_po";
    write_design(cfg.out_dir + "/" + tag, res.best);
    write_history_csv(cfg.out_dir + "/history.csv", res.history);
    write_result_csv(cfg.out_dir + "/result.csv", tag, cfg.process, res.best_eval);
    write_traffic_csv(cfg.out_dir + "/traffic.csv", tm);

    StageTierShares shares = stage_shares(res.best);
    std::printf("mode: %s\nedp: %s\nlatency_ps: %s\nenergy_pj: %s\n",
                to_string(cfg.search.mode), fmt_double(res.best_eval.edp).c_str(),
                fmt_double(res.best_eval.latency_ps).c_str(),
                fmt_double(res.best_eval.energy_pj).c_str());
    std::printf("stages: %.1f%% BT, %.1f%% TT, %.1f%% MT; top links: %.1f%%\n", shares.pct_bt,
                shares.pct_tt, shares.pct_mt, top_link_pct(res.best));
    std::printf("wrote %s/%s\n", cfg.out_dir.c_str(), tag);
    return 0;
}

int cmd_sweep(const ExperimentConfig &cfg, int jobs) {
    SweepResult res = run_sweep(cfg, jobs);
    write_sweep_csvs(res, cfg.out_dir);
    if (!res.failures.empty()) {
        // partial results are on disk; record which cells completed
        std::ofstream manifest(cfg.out_dir + "/manifest.csv", std::ios::binary);
        manifest << "alpha,beta,gamma,rep\n";
        for (const SweepCellResult &c : res.cells)
            manifest << fmt_double(c.alpha) << "," << fmt_double(c.beta) << ","
                     << fmt_double(c.gamma) << "," << c.rep << "\n";
        for (const std::string &f : res.failures)
            std::fprintf(stderr, "sweep group failed: %s\n", f.c_str());
        return kExitInternal;
    }
    std::printf("sweep complete: %zu cells -> %s/{stage_dist,link_dist,stage_by_len,edp}.csv\n",
                res.cells.size(), cfg.out_dir.c_str());
    return 0;
}

int cmd_brute(const ExperimentConfig &cfg) {
    Design base = build_initial_design(cfg, cfg.seed);
    TrafficMatrix tm = build_traffic(cfg);
    BruteResult res = brute_force_tiers(base, tm, cfg.process, cfg.router);

    std::printf("assignments: %llu total, %llu valid\n", res.assignments_total,
                res.assignments_valid);
    std::printf("global minimum edp: %s (latency_ps %s, energy_pj %s)\n",
                fmt_double(res.best_eval.edp).c_str(),
                fmt_double(res.best_eval.latency_ps).c_str(),
                fmt_double(res.best_eval.energy_pj).c_str());
    fs::create_directories(cfg.out_dir);
    write_design(cfg.out_dir + "/design_brute", res.best);
    write_result_csv(cfg.out_dir + "/brute_result.csv", "design_brute", cfg.process,
                     res.best_eval);
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Process-variation-aware monolithic-3D NoC design exploration"};
    app.require_subcommand(1);
    app.fallthrough(); // accept the global flags after the subcommand too

    CommonOpts opts;
    app.add_option("--config", opts.config_path, "JSON experiment config")->required();
    app.add_option("--out", opts.out_override, "output directory override");
    app.add_option("--seed", opts.seed_override, "base seed override")
        ->each([&](const std::string &) { opts.seed_set = true; });
    app.add_option("--jobs", opts.jobs, "parallel sweep groups (default: hardware threads)");

    auto *gen = app.add_subcommand("generate", "emit topology and traffic CSV files");
    std::string design_dir;
    auto *eval = app.add_subcommand("evaluate", "evaluate a design directory");
    eval->add_option("--design", design_dir, "design directory (default <out>/design_pa)");
    auto *opt = app.add_subcommand("optimize", "run the learned local search");
    auto *swp = app.add_subcommand("sweep", "run the (alpha, beta, gamma) experiment grid");
    auto *brt = app.add_subcommand("brute", "exhaustive tier enumeration on a tiny instance");

    CLI11_PARSE(app, argc, argv);

    try {
        ExperimentConfig cfg = resolve_config(opts);
        if (gen->parsed())
            return cmd_generate(cfg);
        if (eval->parsed())
            return cmd_evaluate(cfg, design_dir);
        if (opt->parsed())
            return cmd_optimize(cfg);
        if (swp->parsed())
            return cmd_sweep(cfg, resolve_jobs(opts));
        if (brt->parsed())
            return cmd_brute(cfg);
        return kExitInternal;
    } catch (const ConfigError &e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitValidation;
    } catch (const ValidationError &e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return kExitValidation;
    } catch (const InfeasibleError &e) {
        std::fprintf(stderr, "infeasible: %s\n", e.what());
        return kExitInfeasible;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInternal;
    }
}
