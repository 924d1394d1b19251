// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "m3dnoc/eval.hpp"
#include "m3dnoc/forest.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace m3dnoc {

enum class MoveKind : std::uint8_t {
    SwapCores,      // exchange two cores' router bindings
    MoveLink,       // replace a non-bridge link with an equal-length one elsewhere
    CycleStageTier, // reassign one (router, stage) among BT/TT/MT
    FlipLinkTier,   // toggle one link between top and bottom
};

const char *to_string(MoveKind k);

enum class SearchMode : std::uint8_t {
    ProcessAware,     // all four moves, true process parameters
    ProcessOblivious, // layout moves only; all-MT stages, alternating link tiers
};

const char *to_string(SearchMode m);
SearchMode parse_search_mode(const std::string &s);

struct SearchConfig {
    int iter_max = 8;    // STAGE outer iterations
    int patience = 200;  // consecutive rejected proposals that end a climb
    int n_trees = 50;
    int max_depth = 8;
    int min_leaf = 5;
    std::uint64_t seed = 1;
    SearchMode mode = SearchMode::ProcessAware;
    bool optimize_layout = true; // false freezes placement and link topology
    int perturb_retries = 64;

    void validate() const;
};

/// Objective with basis reuse across tier-only moves. hill_climb drives it:
/// eval_start anchors the cache to a new current design, eval_candidate
/// scores a neighbor, accept promotes the most recently scored candidate.
class DesignObjective {
  public:
    virtual ~DesignObjective() = default;
    virtual double eval_start(const Design &d) = 0;
    virtual double eval_candidate(const Design &d, MoveKind produced_by) = 0;
    virtual void accept(const Design &d, MoveKind produced_by) = 0;
};

/// Traffic-weighted EDP objective.
class EdpObjective : public DesignObjective {
  public:
    EdpObjective(const TrafficMatrix &tm, const ProcessParams &pp, const RouterConfig &rc)
        : tm_(tm), pp_(pp), rc_(rc) {}

    double eval_start(const Design &d) override;
    double eval_candidate(const Design &d, MoveKind produced_by) override;
    void accept(const Design &d, MoveKind produced_by) override;

  private:
    const TrafficMatrix &tm_;
    ProcessParams pp_;
    RouterConfig rc_;
    EvalBasis basis_;
    EvalBasis scratch_;
};

/// Forest prediction over the feature vector; same basis handling.
class SurrogateObjective : public DesignObjective {
  public:
    SurrogateObjective(const RegressionForest &forest, const TrafficMatrix &tm,
                       const ProcessParams &pp, const RouterConfig &rc)
        : forest_(forest), tm_(tm), pp_(pp), rc_(rc) {}

    double eval_start(const Design &d) override;
    double eval_candidate(const Design &d, MoveKind produced_by) override;
    void accept(const Design &d, MoveKind produced_by) override;

  private:
    const RegressionForest &forest_;
    const TrafficMatrix &tm_;
    ProcessParams pp_;
    RouterConfig rc_;
    EvalBasis basis_;
    EvalBasis scratch_;
};

/// All stages multitier, link tiers alternating bottom/top by ascending link
/// id. Valid for any topology (MT admits both link tiers).
Design po_baseline(const Topology &t, TopologyKind kind);

/// Re-canonicalize a design to the process-oblivious form in place.
void apply_po_tiers(Design &d);

/// One random applicable move. Candidates failing validation are rejected and
/// re-drawn up to the retry budget; returns nullopt when no feasible neighbor
/// was found. Identical (design, rng state) yields an identical candidate.
std::optional<std::pair<Design, MoveKind>> perturb(const Design &d, std::mt19937_64 &rng,
                                                   SearchMode mode, bool layout_moves,
                                                   int retries);

struct ClimbResult {
    std::vector<Design> trajectory; // start plus every accepted design, in order
    Design best;                    // last accepted
    double best_obj = 0.0;
};

/// Strict-improvement hill climbing; stops after `patience` consecutive
/// non-improving proposals or when no feasible neighbor exists.
ClimbResult hill_climb(const Design &start, DesignObjective &obj, std::mt19937_64 &rng,
                       const SearchConfig &cfg);

struct HistoryRow {
    int iteration = 0;
    int step = 0; // 1 = objective climb, 2 = surrogate climb
    double best_edp = 0.0;
    std::size_t dataset_rows = 0;
};

struct StageProblem {
    Design initial; // topology/placement source; tiers are canonicalized per mode
    TrafficMatrix traffic;
    ProcessParams process;
    RouterConfig router;
};

struct OptimizeResult {
    Design best;
    EvalResult best_eval; // under the true (non-ideal) process parameters
    std::vector<HistoryRow> history;
    std::size_t dataset_rows = 0;
};

/// The STAGE loop: alternate hill climbing on the objective with hill
/// climbing on a regression-forest prediction of where a climb will end.
/// ProcessOblivious mode optimizes layout under ideal parameters with
/// canonical tiers, then reports the result re-evaluated under the true
/// parameters. ProcessAware mode first derives the process-oblivious design
/// and climbs from it, so its EDP never exceeds the process-oblivious EDP.
OptimizeResult stage_optimize(const StageProblem &problem, const SearchConfig &cfg);

/// Process-aware optimization seeded with an already-computed
/// process-oblivious design (shared by sweep cells).
OptimizeResult stage_optimize_from_po(const StageProblem &problem, const SearchConfig &cfg,
                                      const Design &po_design);

} // namespace m3dnoc
