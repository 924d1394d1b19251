// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "m3dnoc/eval.hpp"

namespace m3dnoc {

struct BruteResult {
    Design best;
    EvalResult best_eval;
    unsigned long long assignments_total = 0; // 3^(3R) * 2^L
    unsigned long long assignments_valid = 0; // survivors of the tier-compatibility filter
};

/// Exhaustively enumerates every stage/link tier assignment on a fixed
/// topology and placement and returns the global minimum-EDP design.
/// Throws InfeasibleError when 3^(3R) * 2^L exceeds `limit` (default 1e7).
BruteResult brute_force_tiers(const Design &base, const TrafficMatrix &tm,
                              const ProcessParams &pp, const RouterConfig &rc,
                              unsigned long long limit = 10'000'000ULL);

} // namespace m3dnoc
