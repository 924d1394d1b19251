// SPDX-License-Identifier: Apache-2.0

#include "m3dnoc/brute.hpp"

#include <limits>

namespace m3dnoc {

namespace {

bool stage_allows_link(StageTier st, LinkTier lt) {
    if (st == StageTier::MT)
        return true;
    return lt == LinkTier::Top ? st == StageTier::TT : st == StageTier::BT;
}

bool assignment_valid(const Design &d) {
    const Topology &t = d.topology;
    for (int li = 0; li < t.link_count(); ++li) {
        LinkTier lt = d.tiers.link_tier[li];
        for (int r : {t.links[li].a, t.links[li].b})
            for (StageKind k : {StageKind::SWA, StageKind::VCA})
                if (!stage_allows_link(d.tiers.stage(r, k), lt))
                    return false;
    }
    return true;
}

} // namespace

BruteResult brute_force_tiers(const Design &base, const TrafficMatrix &tm,
                              const ProcessParams &pp, const RouterConfig &rc,
                              unsigned long long limit) {
    ValidationReport rep = validate_design(base);
    if (!rep.ok)
        throw ValidationError("brute_force_tiers: invalid base design: " + rep.summary());
    tm.validate();
    pp.validate();
    rc.validate();

    const int n = base.topology.router_count();
    const int n_links = base.topology.link_count();
    const int n_slots = n * kStageCount;

    unsigned long long total = 1;
    for (int i = 0; i < n_slots; ++i) {
        total *= 3;
        if (total > limit)
            throw InfeasibleError("brute force space exceeds limit");
    }
    for (int i = 0; i < n_links; ++i) {
        total *= 2;
        if (total > limit)
            throw InfeasibleError("brute force space exceeds limit");
    }

    const EvalBasis basis = make_eval_basis(base, tm);

    Design cand = base;
    BruteResult out;
    out.assignments_total = total;
    out.best = base;
    double best_edp = std::numeric_limits<double>::infinity();
    bool found = false;

    // odometer over stage trits, link bits nested inside
    std::vector<int> trits(n_slots, 0);
    const StageTier tier_of[3] = {StageTier::BT, StageTier::TT, StageTier::MT};
    bool more = true;
    while (more) {
        for (int s = 0; s < n_slots; ++s)
            cand.tiers.stage_tier[s / kStageCount][s % kStageCount] = tier_of[trits[s]];

        for (unsigned long long mask = 0; mask < (1ULL << n_links); ++mask) {
            for (int li = 0; li < n_links; ++li)
                cand.tiers.link_tier[li] =
                    (mask >> li) & 1ULL ? LinkTier::Top : LinkTier::Bottom;
            if (!assignment_valid(cand))
                continue;
            out.assignments_valid++;
            EvalResult r = evaluate_with_basis(cand, basis, pp, rc);
            if (r.edp < best_edp) {
                best_edp = r.edp;
                out.best = cand;
                out.best_eval = r;
                found = true;
            }
        }

        more = false;
        for (int s = 0; s < n_slots; ++s) {
            if (++trits[s] < 3) {
                more = true;
                break;
            }
            trits[s] = 0;
        }
    }

    if (!found)
        throw InfeasibleError("no valid tier assignment exists"); // cannot happen: all-MT is valid
    return out;
}

} // namespace m3dnoc
