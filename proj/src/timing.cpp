// SPDX-License-Identifier: Apache-2.0

#include "m3dnoc/timing.hpp"

#include <cmath>
#include <stdexcept>

namespace m3dnoc {

double stage_delay_2d(StageKind kind, int p, int v, int w) {
    if (p < 2)
        throw std::invalid_argument("stage_delay_2d: p must be >= 2");
    if (v < 1 || w < 1)
        throw std::invalid_argument("stage_delay_2d: v and w must be >= 1");
    switch (kind) {
    case StageKind::VCA: {
        if (p * v <= 1)
            throw std::invalid_argument("stage_delay_2d: p*v must exceed 1");
        return 16.5 * std::log2(static_cast<double>(p) * v) + 125.0 / 6.0;
    }
    case StageKind::SWA:
        return 14.0 * std::log2(static_cast<double>(p)) + 17.5;
    case StageKind::XBAR: {
        int half_ports = (p + 1) / 2; // ceil(p/2)
        return 3.0 * std::log2(static_cast<double>(w) * half_ports) +
               6.0 * std::log2(static_cast<double>(p)) + 6.0;
    }
    }
    throw std::invalid_argument("stage_delay_2d: unknown stage kind");
}

double fo4_ratio(const ProcessParams &pp) { return 1.0 + pp.fo4_slope * pp.alpha; }

double cap_ratio_logic(const ProcessParams &pp) { return 1.0 + pp.cap_slope * pp.alpha; }

double stage_energy_baseline(StageKind kind, int p, int v, int w, const ProcessParams &pp) {
    switch (kind) {
    case StageKind::VCA:
        return pp.e0_pj * p * v;
    case StageKind::SWA:
        return pp.e0_pj * p * p;
    case StageKind::XBAR:
        return pp.e0_pj * w * p * p / 32.0;
    }
    throw std::invalid_argument("stage_energy_baseline: unknown stage kind");
}

StageCost stage_cost(StageKind kind, StageTier tier, int p, int v, int w,
                     const ProcessParams &pp) {
    if (tier != StageTier::BT && pp.tiers < 2)
        throw std::invalid_argument("stage_cost: TT/MT stages require at least 2 tiers");

    const double t2d = stage_delay_2d(kind, p, v, w);
    const double rho = pp.wire_fraction(kind);

    StageCost c;
    switch (tier) {
    case StageTier::BT:
        c.delay_fo4 = t2d;
        c.energy_rel = 1.0;
        break;
    case StageTier::TT:
        c.delay_fo4 = fo4_ratio(pp) * t2d;
        c.energy_rel = (1.0 - rho) * cap_ratio_logic(pp) + rho;
        break;
    case StageTier::MT:
        c.delay_fo4 = (1.0 - pp.gamma) * (0.5 * t2d + 0.5 * fo4_ratio(pp) * t2d);
        c.energy_rel = (1.0 - rho) * (1.0 + pp.cap_slope * pp.alpha / 2.0) +
                       rho / std::sqrt(static_cast<double>(pp.tiers));
        break;
    }
    c.energy_abs_pj = c.energy_rel * stage_energy_baseline(kind, p, v, w, pp);
    return c;
}

LinkCost link_cost(LinkTier tier, const ProcessParams &pp) {
    LinkCost c;
    if (tier == LinkTier::Top) {
        c.delay_ps_per_mm = pp.t_cu_ps_per_mm;
        c.energy_pj_per_mm = pp.e_cu_pj_per_mm;
    } else {
        c.delay_ps_per_mm = pp.t_cu_ps_per_mm * (1.0 + pp.beta);
        c.energy_pj_per_mm = pp.e_cu_pj_per_mm * (1.0 + pp.beta_energy());
    }
    return c;
}

} // namespace m3dnoc
