// SPDX-License-Identifier: Apache-2.0

#include "m3dnoc/search.hpp"
#include "m3dnoc/rng.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <stdexcept>

namespace m3dnoc {

namespace {

constexpr std::uint64_t kPoStreamTag = 0x706f5f737472656dULL;
constexpr std::uint64_t kPaStreamTag = 0x70615f737472656dULL;
constexpr std::uint64_t kForestTag = 0x666f726573743030ULL;

bool is_tier_move(MoveKind k) {
    return k == MoveKind::CycleStageTier || k == MoveKind::FlipLinkTier;
}

bool stage_allows_link(StageTier st, LinkTier lt) {
    if (st == StageTier::MT)
        return true;
    return lt == LinkTier::Top ? st == StageTier::TT : st == StageTier::BT;
}

bool link_tier_compatible(const Design &d, int a, int b, LinkTier lt) {
    for (int r : {a, b})
        for (StageKind k : {StageKind::SWA, StageKind::VCA})
            if (!stage_allows_link(d.tiers.stage(r, k), lt))
                return false;
    return true;
}

// Bridge detection via iterative DFS lowlink; returns per-link flags.
std::vector<char> find_bridges(const Topology &t) {
    const int n = t.router_count();
    std::vector<char> bridge(t.links.size(), 0);
    std::vector<int> disc(n, -1), low(n, 0);
    int timer = 0;

    struct Frame {
        int node;
        int parent_link;
        std::size_t edge_pos;
    };
    std::vector<Frame> stack;
    for (int root = 0; root < n; ++root) {
        if (disc[root] >= 0)
            continue;
        stack.push_back({root, -1, 0});
        disc[root] = low[root] = timer++;
        while (!stack.empty()) {
            Frame &fr = stack.back();
            const auto &edges = t.adjacency()[fr.node];
            if (fr.edge_pos < edges.size()) {
                auto [next, li] = edges[fr.edge_pos++];
                if (li == fr.parent_link)
                    continue;
                if (disc[next] < 0) {
                    disc[next] = low[next] = timer++;
                    stack.push_back({next, li, 0});
                } else {
                    low[fr.node] = std::min(low[fr.node], disc[next]);
                }
            } else {
                int node = fr.node;
                int plink = fr.parent_link;
                stack.pop_back();
                if (!stack.empty()) {
                    int parent = stack.back().node;
                    low[parent] = std::min(low[parent], low[node]);
                    if (low[node] > disc[parent])
                        bridge[plink] = 1;
                }
            }
        }
    }
    return bridge;
}

bool apply_swap_cores(Design &d, std::mt19937_64 &rng) {
    const int n = d.topology.router_count();
    if (n < 2)
        return false;
    int i = static_cast<int>(uniform_below(rng, n));
    int j = static_cast<int>(uniform_below(rng, n - 1));
    if (j >= i)
        j++;
    std::swap(d.topology.core_placement[i], d.topology.core_placement[j]);
    return true;
}

bool apply_move_link(Design &d, std::mt19937_64 &rng) {
    Topology &t = d.topology;
    std::vector<char> bridge = find_bridges(t);
    std::vector<int> movable;
    for (int li = 0; li < t.link_count(); ++li)
        if (!bridge[li])
            movable.push_back(li);
    if (movable.empty())
        return false;
    int li = movable[uniform_below(rng, movable.size())];
    const Link old = t.links[li];

    std::set<std::pair<int, int>> linked;
    for (const Link &l : t.links)
        linked.insert({l.a, l.b});

    const int n = t.router_count();
    const int max_degree = t.max_ports - 1;
    auto degree_after_removal = [&](int r) {
        return t.degree(r) - (r == old.a || r == old.b ? 1 : 0);
    };
    std::vector<std::pair<int, int>> candidates;
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            if (manhattan_distance(t.routers[a], t.routers[b]) != old.manhattan_len)
                continue;
            if (linked.count({a, b}))
                continue;
            if (degree_after_removal(a) >= max_degree || degree_after_removal(b) >= max_degree)
                continue;
            candidates.emplace_back(a, b);
        }
    }
    if (candidates.empty())
        return false;
    auto [a, b] = candidates[uniform_below(rng, candidates.size())];

    Link fresh;
    fresh.a = a;
    fresh.b = b;
    fresh.manhattan_len = old.manhattan_len;
    fresh.length_mm = old.manhattan_len * t.grid.hop_pitch_mm;
    t.links[li] = fresh;
    t.rebuild_adjacency();

    // keep the old tier when the new endpoints' stages admit it, else bottom
    LinkTier keep = d.tiers.link_tier[li];
    d.tiers.link_tier[li] = link_tier_compatible(d, a, b, keep) ? keep : LinkTier::Bottom;
    return true;
}

bool apply_cycle_stage(Design &d, std::mt19937_64 &rng) {
    const int n = d.topology.router_count();
    int r = static_cast<int>(uniform_below(rng, n));
    int s = static_cast<int>(uniform_below(rng, kStageCount));
    StageTier cur = d.tiers.stage_tier[r][s];
    StageTier options[2];
    int count = 0;
    for (StageTier t : {StageTier::BT, StageTier::TT, StageTier::MT})
        if (t != cur)
            options[count++] = t;
    d.tiers.stage_tier[r][s] = options[uniform_below(rng, 2)];
    return true;
}

bool apply_flip_link(Design &d, std::mt19937_64 &rng) {
    if (d.topology.link_count() == 0)
        return false;
    int li = static_cast<int>(uniform_below(rng, d.topology.link_count()));
    d.tiers.link_tier[li] =
        d.tiers.link_tier[li] == LinkTier::Top ? LinkTier::Bottom : LinkTier::Top;
    return true;
}

} // namespace

const char *to_string(MoveKind k) {
    switch (k) {
    case MoveKind::SwapCores: return "swap_cores";
    case MoveKind::MoveLink: return "move_link";
    case MoveKind::CycleStageTier: return "cycle_stage_tier";
    case MoveKind::FlipLinkTier: return "flip_link_tier";
    }
    return "?";
}

const char *to_string(SearchMode m) {
    return m == SearchMode::ProcessAware ? "process_aware" : "process_oblivious";
}

SearchMode parse_search_mode(const std::string &s) {
    if (s == "process_aware") return SearchMode::ProcessAware;
    if (s == "process_oblivious") return SearchMode::ProcessOblivious;
    throw ValidationError("unknown search mode '" + s + "'");
}

void SearchConfig::validate() const {
    if (iter_max < 1 || patience < 1 || n_trees < 1 || max_depth < 1 || min_leaf < 1 ||
        perturb_retries < 1)
        throw ValidationError("search config values must be positive");
}

double EdpObjective::eval_start(const Design &d) {
    basis_ = make_eval_basis(d, tm_);
    return evaluate_with_basis(d, basis_, pp_, rc_).edp;
}

double EdpObjective::eval_candidate(const Design &d, MoveKind produced_by) {
    if (is_tier_move(produced_by))
        return evaluate_with_basis(d, basis_, pp_, rc_).edp;
    scratch_ = make_eval_basis(d, tm_);
    return evaluate_with_basis(d, scratch_, pp_, rc_).edp;
}

void EdpObjective::accept(const Design &, MoveKind produced_by) {
    if (!is_tier_move(produced_by))
        basis_ = std::move(scratch_);
}

double SurrogateObjective::eval_start(const Design &d) {
    basis_ = make_eval_basis(d, tm_);
    return forest_.predict(features_with_basis(d, basis_, pp_, rc_).to_array());
}

double SurrogateObjective::eval_candidate(const Design &d, MoveKind produced_by) {
    if (is_tier_move(produced_by))
        return forest_.predict(features_with_basis(d, basis_, pp_, rc_).to_array());
    scratch_ = make_eval_basis(d, tm_);
    return forest_.predict(features_with_basis(d, scratch_, pp_, rc_).to_array());
}

void SurrogateObjective::accept(const Design &, MoveKind produced_by) {
    if (!is_tier_move(produced_by))
        basis_ = std::move(scratch_);
}

Design po_baseline(const Topology &t, TopologyKind kind) {
    Design d;
    d.topology = t;
    d.kind = kind;
    apply_po_tiers(d);
    return d;
}

void apply_po_tiers(Design &d) {
    const int n = d.topology.router_count();
    d.tiers.stage_tier.assign(n, {StageTier::MT, StageTier::MT, StageTier::MT});
    d.tiers.link_tier.resize(d.topology.links.size());
    for (std::size_t li = 0; li < d.tiers.link_tier.size(); ++li)
        d.tiers.link_tier[li] = li % 2 == 0 ? LinkTier::Bottom : LinkTier::Top;
}

std::optional<std::pair<Design, MoveKind>> perturb(const Design &d, std::mt19937_64 &rng,
                                                   SearchMode mode, bool layout_moves,
                                                   int retries) {
    std::vector<MoveKind> kinds;
    if (layout_moves && d.topology.router_count() >= 2)
        kinds.push_back(MoveKind::SwapCores);
    if (layout_moves && d.kind == TopologyKind::SmallWorld)
        kinds.push_back(MoveKind::MoveLink); // mesh link sets are fixed
    if (mode == SearchMode::ProcessAware) {
        kinds.push_back(MoveKind::CycleStageTier);
        kinds.push_back(MoveKind::FlipLinkTier);
    }
    if (kinds.empty())
        return std::nullopt;

    for (int attempt = 0; attempt < retries; ++attempt) {
        MoveKind kind = kinds[uniform_below(rng, kinds.size())];
        Design cand = d;
        bool applied = false;
        switch (kind) {
        case MoveKind::SwapCores: applied = apply_swap_cores(cand, rng); break;
        case MoveKind::MoveLink: applied = apply_move_link(cand, rng); break;
        case MoveKind::CycleStageTier: applied = apply_cycle_stage(cand, rng); break;
        case MoveKind::FlipLinkTier: applied = apply_flip_link(cand, rng); break;
        }
        if (!applied)
            continue;
        if (mode == SearchMode::ProcessOblivious)
            apply_po_tiers(cand);
        if (validate_design(cand).ok)
            return std::make_pair(std::move(cand), kind);
    }
    return std::nullopt;
}

ClimbResult hill_climb(const Design &start, DesignObjective &obj, std::mt19937_64 &rng,
                       const SearchConfig &cfg) {
    ClimbResult res;
    res.trajectory.push_back(start);
    res.best = start;
    res.best_obj = obj.eval_start(start);

    int fails = 0;
    while (fails < cfg.patience) {
        auto cand = perturb(res.best, rng, cfg.mode, cfg.optimize_layout, cfg.perturb_retries);
        if (!cand)
            break; // no feasible neighbor
        double v = obj.eval_candidate(cand->first, cand->second);
        if (v < res.best_obj) {
            res.best = std::move(cand->first);
            res.best_obj = v;
            obj.accept(res.best, cand->second);
            res.trajectory.push_back(res.best);
            fails = 0;
        } else {
            fails++;
        }
    }
    return res;
}

namespace {

struct StageLoopResult {
    Design best;
    double best_obj = std::numeric_limits<double>::infinity();
    std::vector<HistoryRow> history;
    std::size_t dataset_rows = 0;
};

// Restart point for a stalled iteration: keep the layout, redraw every tier.
// Stages are sampled uniformly, then each link picks uniformly among the
// tiers its endpoints admit; incompatible draws are resampled.
Design randomize_tiers(const Design &base, std::mt19937_64 &rng) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        Design d = base;
        for (auto &stages : d.tiers.stage_tier)
            for (StageTier &t : stages)
                t = static_cast<StageTier>(uniform_below(rng, 3));
        bool ok = true;
        for (int li = 0; li < d.topology.link_count() && ok; ++li) {
            const Link &l = d.topology.links[li];
            bool top_ok = link_tier_compatible(d, l.a, l.b, LinkTier::Top);
            bool bottom_ok = link_tier_compatible(d, l.a, l.b, LinkTier::Bottom);
            if (top_ok && bottom_ok)
                d.tiers.link_tier[li] =
                    uniform_below(rng, 2) ? LinkTier::Top : LinkTier::Bottom;
            else if (top_ok)
                d.tiers.link_tier[li] = LinkTier::Top;
            else if (bottom_ok)
                d.tiers.link_tier[li] = LinkTier::Bottom;
            else
                ok = false;
        }
        if (ok && validate_design(d).ok)
            return d;
    }
    Design d = base;
    apply_po_tiers(d); // always valid
    return d;
}

Design shuffle_placement(const Design &base, std::mt19937_64 &rng) {
    Design d = base;
    auto &place = d.topology.core_placement;
    for (std::size_t i = place.size() - 1; i > 0; --i)
        std::swap(place[i], place[uniform_below(rng, i + 1)]);
    return d;
}

// The STAGE alternation over one objective. `obj_pp` is the parameter set the
// search optimizes against (ideal for process-oblivious runs).
StageLoopResult stage_loop(const Design &start, const TrafficMatrix &tm,
                           const ProcessParams &obj_pp, const RouterConfig &rc,
                           const SearchConfig &cfg, std::mt19937_64 &rng) {
    EdpObjective edp(tm, obj_pp, rc);
    TrainingDataset dataset;
    StageLoopResult out;
    Design current = start;
    bool improved_last_iter = true;

    for (int iter = 1; iter <= cfg.iter_max; ++iter) {
        // A stalled iteration restarts from a randomized valid design instead
        // of re-climbing the same basin; the dataset keeps accumulating.
        if (!improved_last_iter) {
            current = cfg.mode == SearchMode::ProcessOblivious
                          ? shuffle_placement(out.best, rng)
                          : randomize_tiers(out.best, rng);
        }
        const double best_before = out.best_obj;

        // Step 1: climb the real objective, harvest the trajectory
        ClimbResult c1 = hill_climb(current, edp, rng, cfg);
        for (const Design &d : c1.trajectory) {
            EvalBasis basis = make_eval_basis(d, tm);
            dataset.push_back({features_with_basis(d, basis, obj_pp, rc).to_array(),
                               c1.best_obj});
        }
        if (c1.best_obj < out.best_obj) {
            out.best = c1.best;
            out.best_obj = c1.best_obj;
        }
        out.history.push_back({iter, 1, out.best_obj, dataset.size()});

        // Step 2: learn where climbs end, then climb the prediction
        ForestParams fp{cfg.n_trees, cfg.max_depth, cfg.min_leaf,
                        derive_seed(cfg.seed, kForestTag, static_cast<std::uint64_t>(iter))};
        RegressionForest forest = fit_forest(dataset, fp);
        SurrogateObjective surrogate(forest, tm, obj_pp, rc);
        ClimbResult c2 = hill_climb(c1.best, surrogate, rng, cfg);

        double c2_obj = edp.eval_start(c2.best);
        if (c2_obj < out.best_obj) {
            out.best = c2.best;
            out.best_obj = c2_obj;
        }
        out.history.push_back({iter, 2, out.best_obj, dataset.size()});
        current = c2.best;
        improved_last_iter = out.best_obj < best_before;
    }
    out.dataset_rows = dataset.size();
    return out;
}

void check_problem(const StageProblem &p) {
    ValidationReport rep = validate_design(p.initial);
    if (!rep.ok)
        throw ValidationError("stage_optimize: invalid initial design: " + rep.summary());
    p.traffic.validate();
    p.process.validate();
    p.router.validate();
}

} // namespace

OptimizeResult stage_optimize_from_po(const StageProblem &problem, const SearchConfig &cfg,
                                      const Design &po_design) {
    check_problem(problem);
    cfg.validate();
    ValidationReport rep = validate_design(po_design);
    if (!rep.ok)
        throw ValidationError("stage_optimize_from_po: invalid seed design: " + rep.summary());
    SearchConfig pa_cfg = cfg;
    pa_cfg.mode = SearchMode::ProcessAware;

    std::mt19937_64 rng(derive_seed(cfg.seed, kPaStreamTag));
    StageLoopResult r =
        stage_loop(po_design, problem.traffic, problem.process, problem.router, pa_cfg, rng);

    OptimizeResult out;
    out.best = r.best;
    out.best_eval = evaluate(r.best, problem.traffic, problem.process, problem.router);
    out.history = std::move(r.history);
    out.dataset_rows = r.dataset_rows;
    return out;
}

OptimizeResult stage_optimize(const StageProblem &problem, const SearchConfig &cfg) {
    check_problem(problem);
    cfg.validate();

    if (cfg.mode == SearchMode::ProcessOblivious) {
        SearchConfig po_cfg = cfg;
        po_cfg.mode = SearchMode::ProcessOblivious;
        std::mt19937_64 rng(derive_seed(cfg.seed, kPoStreamTag));
        Design start = po_baseline(problem.initial.topology, problem.initial.kind);
        StageLoopResult r = stage_loop(start, problem.traffic, problem.process.ideal(),
                                       problem.router, po_cfg, rng);
        OptimizeResult out;
        out.best = r.best;
        // the oblivious design is what it is; its reported cost uses the true parameters
        out.best_eval = evaluate(r.best, problem.traffic, problem.process, problem.router);
        out.history = std::move(r.history);
        out.dataset_rows = r.dataset_rows;
        return out;
    }

    SearchConfig po_cfg = cfg;
    po_cfg.mode = SearchMode::ProcessOblivious;
    OptimizeResult po = stage_optimize(problem, po_cfg);
    return stage_optimize_from_po(problem, cfg, po.best);
}

} // namespace m3dnoc
