// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "m3dnoc/core.hpp"

#include <array>

namespace m3dnoc {

/// Alternating routers and links between two endpoint routers.
/// routers.size() == links.size() + 1; a self-path holds one router.
struct Path {
    std::vector<int> routers;
    std::vector<int> links;

    int hops() const { return static_cast<int>(links.size()); }
};

/// All-pairs router-to-router paths. Core pairs map through the placement.
struct RouteTable {
    int n = 0;
    std::vector<Path> paths; // row-major [src*n + dst]

    const Path &at(int src_router, int dst_router) const {
        return paths[static_cast<std::size_t>(src_router) * n + dst_router];
    }
};

/// XYZ dimension-order path between two cores' routers; Mesh designs only.
Path route_mesh_xyz(const Design &d, int core_i, int core_j);

/// Minimum-hop path between two cores' routers, ties broken by the smallest
/// lexicographic router-index sequence. Deterministic, seed-independent.
Path route_shortest(const Design &d, int core_i, int core_j);

/// Builds the kind-appropriate all-pairs table (XYZ for meshes, deterministic
/// shortest paths otherwise). Throws ValidationError on unreachable pairs.
RouteTable build_route_table(const Topology &t, TopologyKind kind);

struct EvalResult {
    double latency_ps = 0.0; // traffic-weighted delay sum (ps * rate units)
    double energy_pj = 0.0;  // traffic-weighted energy sum (pJ * rate units)
    double edp = 0.0;        // latency_ps * energy_pj
};

/// Inputs the STAGE surrogate model learns from.
struct FeatureVector {
    double avg_hops = 0.0;            // mean hop count over ordered core pairs, i != j
    double weighted_hops = 0.0;       // sum f_ij*hops / sum f_ij
    double clustering = 0.0;          // clustering_coefficient of the topology
    double bottom_link_penalty = 0.0; // f-weighted tungsten slowdown on used bottom links
    double top_stage_penalty = 0.0;   // f-weighted delay excess of TT/MT stages over BT, ps

    std::array<double, 5> to_array() const {
        return {avg_hops, weighted_hops, clustering, bottom_link_penalty, top_stage_penalty};
    }
};

inline constexpr int kFeatureCount = 5;

/// Routing-and-traffic dependent intermediates shared by evaluate and
/// features: per-router and per-link traffic loads plus hop statistics.
/// Valid as long as topology, placement and traffic are unchanged; tier
/// reassignments do not invalidate it.
struct EvalBasis {
    RouteTable table;
    std::vector<double> router_load; // sum of f_ij over paths through each router
    std::vector<double> link_load;   // sum of f_ij over paths through each link
    double traffic_total = 0.0;
    double hops_weighted_sum = 0.0; // sum f_ij * hops(i,j)
    double avg_hops = 0.0;          // unweighted mean over ordered pairs i != j
};

EvalBasis make_eval_basis(const Design &d, const TrafficMatrix &tm);

/// Traffic-weighted latency/energy/EDP given a prebuilt basis. The stage
/// delay of every router on a path is counted in full, with that router's
/// actual port count (degree + 1).
EvalResult evaluate_with_basis(const Design &d, const EvalBasis &basis, const ProcessParams &pp,
                               const RouterConfig &rc);

/// Validates the design, then evaluates it.
EvalResult evaluate(const Design &d, const TrafficMatrix &tm, const ProcessParams &pp,
                    const RouterConfig &rc);

FeatureVector features_with_basis(const Design &d, const EvalBasis &basis,
                                  const ProcessParams &pp, const RouterConfig &rc);

/// Validates the design, then extracts features.
FeatureVector features(const Design &d, const TrafficMatrix &tm, const ProcessParams &pp,
                       const RouterConfig &rc);

} // namespace m3dnoc
