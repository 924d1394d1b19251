// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "m3dnoc/config.hpp"
#include "m3dnoc/search.hpp"

#include <string>
#include <vector>

namespace m3dnoc {

struct SweepCellResult {
    int alpha_idx = 0;
    int beta_idx = 0;
    int gamma_idx = 0;
    int rep = 0;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    EvalResult po_eval;    // shared PO design evaluated under the cell's parameters
    EvalResult pa_eval;    // process-aware optimum
    double edp_ideal = 0.0; // PO design under ideal (alpha = beta = 0) conditions
    Design po_design;
    Design pa_design;
};

struct SweepResult {
    std::vector<SweepCellResult> cells;  // ordered (alpha, beta, gamma, rep)
    std::vector<std::string> failures;   // one entry per failed (gamma, rep) group
};

/// Runs PO once per (gamma, replicate) pair — the oblivious design ignores
/// alpha and beta by definition — then one process-aware optimization per
/// cell, seeded from that PO design. Replicates use seeds derived from the
/// base seed and the cell coordinates; cells are evaluated in parallel when
/// jobs > 1 with results merged in deterministic order.
SweepResult run_sweep(const ExperimentConfig &cfg, int jobs);

/// Emits stage_dist.csv, link_dist.csv, stage_by_len.csv and edp.csv.
void write_sweep_csvs(const SweepResult &res, const std::string &out_dir);

/// Percentage helpers shared with the CLI and tests.
struct StageTierShares {
    double pct_bt = 0.0;
    double pct_tt = 0.0;
    double pct_mt = 0.0;
};
StageTierShares stage_shares(const Design &d); // all stages
StageTierShares stage_shares(const Design &d, StageKind kind);
double top_link_pct(const Design &d);

} // namespace m3dnoc
