// SPDX-License-Identifier: Apache-2.0

#include "m3dnoc/sweep.hpp"
#include "m3dnoc/io.hpp"
#include "m3dnoc/log.hpp"
#include "m3dnoc/rng.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <thread>

namespace fs = std::filesystem;

namespace m3dnoc {

namespace {

constexpr std::uint64_t kTopoTag = 0x746f706f5f736564ULL;
constexpr std::uint64_t kPoSeedTag = 0x706f5f7365656473ULL;
constexpr std::uint64_t kPaSeedTag = 0x70615f7365656473ULL;

std::uint64_t cell_tag(int ai, int bi, int gi, int rep) {
    return (static_cast<std::uint64_t>(ai) << 48) ^ (static_cast<std::uint64_t>(bi) << 32) ^
           (static_cast<std::uint64_t>(gi) << 16) ^ static_cast<std::uint64_t>(rep);
}

} // namespace

StageTierShares stage_shares(const Design &d) {
    int counts[3] = {0, 0, 0};
    for (const auto &stages : d.tiers.stage_tier)
        for (StageTier t : stages)
            counts[static_cast<int>(t)]++;
    double total = static_cast<double>(d.tiers.stage_tier.size()) * kStageCount;
    return {100.0 * counts[0] / total, 100.0 * counts[1] / total, 100.0 * counts[2] / total};
}

StageTierShares stage_shares(const Design &d, StageKind kind) {
    int counts[3] = {0, 0, 0};
    for (const auto &stages : d.tiers.stage_tier)
        counts[static_cast<int>(stages[static_cast<int>(kind)])]++;
    double total = static_cast<double>(d.tiers.stage_tier.size());
    return {100.0 * counts[0] / total, 100.0 * counts[1] / total, 100.0 * counts[2] / total};
}

double top_link_pct(const Design &d) {
    if (d.tiers.link_tier.empty())
        return 0.0;
    int top = 0;
    for (LinkTier t : d.tiers.link_tier)
        if (t == LinkTier::Top)
            top++;
    return 100.0 * top / static_cast<double>(d.tiers.link_tier.size());
}

SweepResult run_sweep(const ExperimentConfig &cfg, int jobs) {
    cfg.validate();
    const TrafficMatrix tm = build_traffic(cfg);
    const SweepSpec &sw = cfg.sweep;
    const int na = static_cast<int>(sw.alphas.size());
    const int nb = static_cast<int>(sw.betas.size());
    const int ng = static_cast<int>(sw.gammas.size());
    const int nr = sw.n_seeds;

    // one group per (gamma, replicate): the PO design is shared by its cells
    struct Group {
        int gi = 0;
        int rep = 0;
        std::vector<SweepCellResult> cells; // (alpha-major, beta) order
        std::string error;
    };
    std::vector<Group> groups;
    groups.reserve(static_cast<std::size_t>(ng) * nr);
    for (int gi = 0; gi < ng; ++gi)
        for (int rep = 0; rep < nr; ++rep)
            groups.push_back({gi, rep, {}, {}});

    auto run_group = [&](Group &g) {
        const std::uint64_t topo_seed =
            derive_seed(cfg.seed, kTopoTag, static_cast<std::uint64_t>(g.rep));
        const Design initial = build_initial_design(cfg, topo_seed);

        ProcessParams pp_gamma = cfg.process;
        pp_gamma.gamma = sw.gammas[g.gi];

        StageProblem po_problem{initial, tm, pp_gamma, cfg.router};
        SearchConfig po_cfg = cfg.search;
        po_cfg.mode = SearchMode::ProcessOblivious;
        po_cfg.seed = derive_seed(cfg.seed, kPoSeedTag, cell_tag(0, 0, g.gi, g.rep));
        OptimizeResult po = stage_optimize(po_problem, po_cfg);

        const double edp_ideal =
            evaluate(po.best, tm, pp_gamma.ideal(), cfg.router).edp;

        for (int ai = 0; ai < na; ++ai) {
            for (int bi = 0; bi < nb; ++bi) {
                ProcessParams pp_cell = pp_gamma;
                pp_cell.alpha = sw.alphas[ai];
                pp_cell.beta = sw.betas[bi];

                StageProblem problem{initial, tm, pp_cell, cfg.router};
                SearchConfig pa_cfg = cfg.search;
                pa_cfg.mode = SearchMode::ProcessAware;
                pa_cfg.seed =
                    derive_seed(cfg.seed, kPaSeedTag, cell_tag(ai, bi, g.gi, g.rep));
                OptimizeResult pa = stage_optimize_from_po(problem, pa_cfg, po.best);

                SweepCellResult cell;
                cell.alpha_idx = ai;
                cell.beta_idx = bi;
                cell.gamma_idx = g.gi;
                cell.rep = g.rep;
                cell.alpha = pp_cell.alpha;
                cell.beta = pp_cell.beta;
                cell.gamma = pp_cell.gamma;
                cell.po_eval = evaluate(po.best, tm, pp_cell, cfg.router);
                cell.pa_eval = pa.best_eval;
                cell.edp_ideal = edp_ideal;
                cell.po_design = po.best;
                cell.pa_design = pa.best;
                g.cells.push_back(std::move(cell));

                log_debug("sweep cell a=" + fmt_double(pp_cell.alpha) +
                          " b=" + fmt_double(pp_cell.beta) + " g=" + fmt_double(pp_cell.gamma) +
                          " rep=" + std::to_string(g.rep) +
                          " edp_po=" + fmt_double(cell.po_eval.edp) +
                          " edp_pa=" + fmt_double(cell.pa_eval.edp));
            }
        }
        log_info("sweep group gamma=" + fmt_double(sw.gammas[g.gi]) +
                 " rep=" + std::to_string(g.rep) + " done");
    };

    if (jobs < 1)
        jobs = 1;
    if (jobs == 1) {
        for (Group &g : groups) {
            try {
                run_group(g);
            } catch (const std::exception &e) {
                g.error = e.what();
            }
        }
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= groups.size())
                    return;
                try {
                    run_group(groups[i]);
                } catch (const std::exception &e) {
                    groups[i].error = e.what();
                }
            }
        };
        std::vector<std::thread> pool;
        int n_threads = std::min<int>(jobs, static_cast<int>(groups.size()));
        for (int i = 0; i < n_threads; ++i)
            pool.emplace_back(worker);
        for (auto &t : pool)
            t.join();
    }

    SweepResult res;
    for (int ai = 0; ai < na; ++ai)
        for (int bi = 0; bi < nb; ++bi)
            for (int gi = 0; gi < ng; ++gi)
                for (int rep = 0; rep < nr; ++rep) {
                    Group &g = groups[static_cast<std::size_t>(gi) * nr + rep];
                    if (!g.error.empty())
                        continue;
                    res.cells.push_back(g.cells[static_cast<std::size_t>(ai) * nb + bi]);
                }
    for (const Group &g : groups)
        if (!g.error.empty())
            res.failures.push_back("gamma=" + fmt_double(sw.gammas[g.gi]) +
                                   " rep=" + std::to_string(g.rep) + ": " + g.error);
    return res;
}

namespace {

std::ofstream open_atomic(const fs::path &dir, const std::string &name, fs::path &tmp_out) {
    tmp_out = dir / ("." + name + ".tmp");
    std::ofstream out(tmp_out, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write '" + tmp_out.string() + "'");
    return out;
}

void commit(const fs::path &dir, const std::string &name, const fs::path &tmp) {
    fs::rename(tmp, dir / name);
}

} // namespace

void write_sweep_csvs(const SweepResult &res, const std::string &out_dir) {
    fs::path dir(out_dir);
    fs::create_directories(dir);
    fs::path tmp;

    {
        auto out = open_atomic(dir, "stage_dist.csv", tmp);
        out << "alpha,beta,gamma,stage_kind,pct_BT,pct_TT,pct_MT\n";
        for (const SweepCellResult &c : res.cells) {
            auto emit = [&](const char *kind, const StageTierShares &s) {
                out << fmt_double(c.alpha) << "," << fmt_double(c.beta) << ","
                    << fmt_double(c.gamma) << "," << kind << "," << fmt_double(s.pct_bt) << ","
                    << fmt_double(s.pct_tt) << "," << fmt_double(s.pct_mt) << "\n";
            };
            emit("VCA", stage_shares(c.pa_design, StageKind::VCA));
            emit("SWA", stage_shares(c.pa_design, StageKind::SWA));
            emit("XBAR", stage_shares(c.pa_design, StageKind::XBAR));
            emit("ALL", stage_shares(c.pa_design));
        }
        out.close();
        commit(dir, "stage_dist.csv", tmp);
    }

    {
        auto out = open_atomic(dir, "link_dist.csv", tmp);
        out << "alpha,beta,gamma,pct_top,pct_bottom\n";
        for (const SweepCellResult &c : res.cells) {
            double top = top_link_pct(c.pa_design);
            out << fmt_double(c.alpha) << "," << fmt_double(c.beta) << "," << fmt_double(c.gamma)
                << "," << fmt_double(top) << "," << fmt_double(100.0 - top) << "\n";
        }
        out.close();
        commit(dir, "link_dist.csv", tmp);
    }

    {
        // tier mix of the SWA/VCA stages attached to links of each length
        auto out = open_atomic(dir, "stage_by_len.csv", tmp);
        out << "alpha,beta,gamma,manhattan_len,pct_BT,pct_MT\n";
        for (const SweepCellResult &c : res.cells) {
            std::map<int, std::array<int, 3>> buckets;
            const Topology &t = c.pa_design.topology;
            for (int li = 0; li < t.link_count(); ++li) {
                auto &b = buckets.try_emplace(t.links[li].manhattan_len).first->second;
                for (int r : {t.links[li].a, t.links[li].b})
                    for (StageKind k : {StageKind::SWA, StageKind::VCA})
                        b[static_cast<int>(c.pa_design.tiers.stage(r, k))]++;
            }
            for (const auto &[len, counts] : buckets) {
                double total = counts[0] + counts[1] + counts[2];
                out << fmt_double(c.alpha) << "," << fmt_double(c.beta) << ","
                    << fmt_double(c.gamma) << "," << len << ","
                    << fmt_double(100.0 * counts[0] / total) << ","
                    << fmt_double(100.0 * counts[2] / total) << "\n";
            }
        }
        out.close();
        commit(dir, "stage_by_len.csv", tmp);
    }

    {
        auto out = open_atomic(dir, "edp.csv", tmp);
        out << "alpha,beta,gamma,edp_po,edp_pa,edp_po_norm,edp_pa_norm\n";
        for (const SweepCellResult &c : res.cells) {
            out << fmt_double(c.alpha) << "," << fmt_double(c.beta) << "," << fmt_double(c.gamma)
                << "," << fmt_double(c.po_eval.edp) << "," << fmt_double(c.pa_eval.edp) << ","
                << fmt_double(c.po_eval.edp / c.edp_ideal) << ","
                << fmt_double(c.pa_eval.edp / c.edp_ideal) << "\n";
        }
        out.close();
        commit(dir, "edp.csv", tmp);
    }
}

} // namespace m3dnoc
