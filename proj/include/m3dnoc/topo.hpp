// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "m3dnoc/core.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace m3dnoc {

struct SmallWorldSpec {
    std::optional<int> link_budget; // default: link count of the equivalent mesh
    double decay_exponent = 2.0;    // eta; pair sampling weight is distance^-eta
    std::uint64_t seed = 1;
    int max_ports = 7;
};

enum class TrafficKind : std::uint8_t { Uniform, Hotspot, DistanceDecay };

const char *to_string(TrafficKind k);
TrafficKind parse_traffic_kind(const std::string &s);

struct TrafficSpec {
    TrafficKind kind = TrafficKind::Uniform;
    double hotspot_fraction = 0.5; // share of each source's traffic aimed at hot cores
    int hotspot_count = 0;         // 0 -> max(1, N/8)
    double decay_theta = 4.0;      // DistanceDecay exponent
    std::uint64_t seed = 1;
};

/// Full grid with links between unit-distance neighbors and identity placement.
Topology gen_mesh(const GridSpec &g, int max_ports = 7);

int mesh_link_count(const GridSpec &g);

/// Power-law small-world topology: a distance-biased random spanning tree for
/// connectivity, then extra links sampled without replacement with probability
/// proportional to manhattan_distance^-eta, rejecting degree-cap violations.
/// Deterministic given the seed; throws InfeasibleError when the budget cannot
/// be met under the degree caps.
Topology gen_smallworld(const GridSpec &g, const SmallWorldSpec &s);

/// Synthetic traffic; rows normalized to sum 1 per source core.
TrafficMatrix gen_traffic(const GridSpec &g, const TrafficSpec &ts);

/// CSV with header `src,dst,weight`, zero-based core indices, one row per
/// nonzero entry. Malformed rows, out-of-range indices, duplicate pairs,
/// self-traffic and negative weights are distinct errors.
TrafficMatrix load_traffic_csv(const std::string &path, int n_cores);

} // namespace m3dnoc
