// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "m3dnoc/core.hpp"

namespace m3dnoc {

/// Cost of one intra-router pipeline stage under a tier choice.
struct StageCost {
    double delay_fo4 = 0.0;     // stage delay in FO4 units
    double energy_rel = 1.0;    // multiplier on the 2D baseline stage energy
    double energy_abs_pj = 0.0; // energy_rel * baseline, picojoules
};

/// Per-unit-length cost of an inter-router link on a given tier.
struct LinkCost {
    double delay_ps_per_mm = 0.0;
    double energy_pj_per_mm = 0.0;
};

/// 2D stage delay in FO4 units as a function of ports p, virtual channels v
/// and flit width w:
///   VCA  = 33*log4(p*v) + 125/6
///   SWA  = 28*log4(p)   + 35/2
///   XBAR = 9*log8(w*ceil(p/2)) + 6*log2(p) + 6
/// Evaluated in log2 form (33*log4 x = 16.5*log2 x, 9*log8 x = 3*log2 x).
double stage_delay_2d(StageKind kind, int p, int v, int w);

/// Degraded-to-nominal FO4 ratio: 1 + fo4_slope * alpha (>= 1).
double fo4_ratio(const ProcessParams &pp);

/// Logic capacitance growth with alpha: 1 + cap_slope * alpha (>= 1).
double cap_ratio_logic(const ProcessParams &pp);

/// Parametric 2D baseline stage energy, picojoules:
///   VCA = e0*p*v, SWA = e0*p^2, XBAR = e0*w*p^2/32.
double stage_energy_baseline(StageKind kind, int p, int v, int w, const ProcessParams &pp);

/// Stage delay and energy under a tier choice.
///   BT: unchanged 2D behavior.
///   TT: delay scaled by the FO4 ratio; only the logic share (1-rho) of the
///       capacitance grows, wire capacitance is unchanged.
///   MT: logic split evenly across tiers, so half the logic sees the degraded
///       FO4 and half the capacitance growth; wire capacitance shrinks to
///       1/sqrt(T); delay gains the multitier improvement factor (1-gamma).
/// Requires tiers >= 2 for TT and MT.
StageCost stage_cost(StageKind kind, StageTier tier, int p, int v, int w,
                     const ProcessParams &pp);

/// Link cost by tier: top-tier copper is the baseline; bottom-tier tungsten
/// pays (1+beta) on delay and (1+beta_e) on energy.
LinkCost link_cost(LinkTier tier, const ProcessParams &pp);

} // namespace m3dnoc
