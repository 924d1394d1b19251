// SPDX-License-Identifier: Apache-2.0

#include "m3dnoc/eval.hpp"
#include "m3dnoc/timing.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <stdexcept>

namespace m3dnoc {

namespace {

int link_between(const Topology &t, int a, int b) {
    for (const auto &[nbr, li] : t.adjacency()[a])
        if (nbr == b)
            return li;
    throw ValidationError("no link between routers " + std::to_string(a) + " and " +
                          std::to_string(b));
}

Path xyz_path(const Topology &t, int src, int dst) {
    Path p;
    p.routers.push_back(src);
    Coord cur = t.routers[src];
    const Coord goal = t.routers[dst];
    auto step = [&](int *axis, int target) {
        while (*axis != target) {
            int prev = t.grid.id_of(cur);
            *axis += (target > *axis) ? 1 : -1;
            int next = t.grid.id_of(cur);
            p.links.push_back(link_between(t, prev, next));
            p.routers.push_back(next);
        }
    };
    step(&cur.x, goal.x);
    step(&cur.y, goal.y);
    step(&cur.z, goal.z);
    return p;
}

// Shortest paths into `dst` for every source, lexicographically smallest
// router sequence among minimum-hop paths: BFS from dst gives distances,
// then each source greedily steps to its smallest-index neighbor that is
// one hop closer to dst.
void shortest_paths_to(const Topology &t, int dst, RouteTable &table) {
    const int n = t.router_count();
    std::vector<int> dist(n, -1);
    std::deque<int> q;
    dist[dst] = 0;
    q.push_back(dst);
    while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        for (const auto &[v, li] : t.adjacency()[u]) {
            (void)li;
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                q.push_back(v);
            }
        }
    }

    for (int src = 0; src < n; ++src) {
        Path &p = table.paths[static_cast<std::size_t>(src) * n + dst];
        if (dist[src] < 0)
            throw ValidationError("router " + std::to_string(src) + " cannot reach router " +
                                  std::to_string(dst));
        p.routers.clear();
        p.links.clear();
        p.routers.push_back(src);
        int cur = src;
        while (cur != dst) {
            int best = -1, best_link = -1;
            for (const auto &[v, li] : t.adjacency()[cur]) { // sorted by router index
                if (dist[v] == dist[cur] - 1) {
                    best = v;
                    best_link = li;
                    break;
                }
            }
            if (best < 0)
                throw ValidationError("broken shortest-path chain"); // unreachable on valid input
            p.links.push_back(best_link);
            p.routers.push_back(best);
            cur = best;
        }
    }
}

} // namespace

Path route_mesh_xyz(const Design &d, int core_i, int core_j) {
    if (d.kind != TopologyKind::Mesh)
        throw std::invalid_argument("route_mesh_xyz requires a mesh design");
    return xyz_path(d.topology, d.topology.core_placement[core_i],
                    d.topology.core_placement[core_j]);
}

Path route_shortest(const Design &d, int core_i, int core_j) {
    RouteTable table;
    table.n = d.topology.router_count();
    table.paths.resize(static_cast<std::size_t>(table.n) * table.n);
    shortest_paths_to(d.topology, d.topology.core_placement[core_j], table);
    return table.at(d.topology.core_placement[core_i], d.topology.core_placement[core_j]);
}

RouteTable build_route_table(const Topology &t, TopologyKind kind) {
    const int n = t.router_count();
    RouteTable table;
    table.n = n;
    table.paths.resize(static_cast<std::size_t>(n) * n);
    if (kind == TopologyKind::Mesh) {
        for (int s = 0; s < n; ++s)
            for (int d = 0; d < n; ++d)
                table.paths[static_cast<std::size_t>(s) * n + d] = xyz_path(t, s, d);
    } else {
        for (int d = 0; d < n; ++d)
            shortest_paths_to(t, d, table);
    }
    return table;
}

EvalBasis make_eval_basis(const Design &d, const TrafficMatrix &tm) {
    const Topology &t = d.topology;
    const int n = t.router_count();
    if (tm.size() != n)
        throw ValidationError("traffic matrix size does not match core count");

    EvalBasis basis;
    basis.table = build_route_table(t, d.kind);
    basis.router_load.assign(n, 0.0);
    basis.link_load.assign(t.links.size(), 0.0);

    long long pair_count = 0;
    long long hop_sum = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j)
                continue;
            const Path &p = basis.table.at(t.core_placement[i], t.core_placement[j]);
            hop_sum += p.hops();
            pair_count++;
            double f = tm.at(i, j);
            if (f == 0.0)
                continue;
            basis.traffic_total += f;
            basis.hops_weighted_sum += f * p.hops();
            for (int r : p.routers)
                basis.router_load[r] += f;
            for (int li : p.links)
                basis.link_load[li] += f;
        }
    }
    basis.avg_hops = pair_count > 0 ? static_cast<double>(hop_sum) / pair_count : 0.0;
    return basis;
}

EvalResult evaluate_with_basis(const Design &d, const EvalBasis &basis, const ProcessParams &pp,
                               const RouterConfig &rc) {
    const Topology &t = d.topology;
    const int n = t.router_count();

    double latency = 0.0;
    double energy = 0.0;
    for (int r = 0; r < n; ++r) {
        double w = basis.router_load[r];
        if (w == 0.0)
            continue;
        const int p = t.ports(r);
        double delay_ps = 0.0;
        double energy_pj = 0.0;
        for (StageKind k : kAllStages) {
            StageCost sc = stage_cost(k, d.tiers.stage(r, k), p, rc.vcs, rc.flit_bits, pp);
            delay_ps += sc.delay_fo4 * pp.fo4_ps;
            energy_pj += sc.energy_abs_pj;
        }
        latency += w * delay_ps;
        energy += w * energy_pj;
    }
    for (int li = 0; li < t.link_count(); ++li) {
        double w = basis.link_load[li];
        if (w == 0.0)
            continue;
        LinkCost lc = link_cost(d.tiers.link_tier[li], pp);
        latency += w * t.links[li].length_mm * lc.delay_ps_per_mm;
        energy += w * t.links[li].length_mm * lc.energy_pj_per_mm;
    }

    EvalResult res;
    res.latency_ps = latency;
    res.energy_pj = energy;
    res.edp = latency * energy;
    return res;
}

EvalResult evaluate(const Design &d, const TrafficMatrix &tm, const ProcessParams &pp,
                    const RouterConfig &rc) {
    ValidationReport rep = validate_design(d);
    if (!rep.ok)
        throw ValidationError("evaluate: invalid design: " + rep.summary());
    tm.validate();
    pp.validate();
    return evaluate_with_basis(d, make_eval_basis(d, tm), pp, rc);
}

FeatureVector features_with_basis(const Design &d, const EvalBasis &basis,
                                  const ProcessParams &pp, const RouterConfig &rc) {
    const Topology &t = d.topology;
    FeatureVector fv;
    fv.avg_hops = basis.avg_hops;
    fv.weighted_hops =
        basis.traffic_total > 0.0 ? basis.hops_weighted_sum / basis.traffic_total : 0.0;
    fv.clustering = clustering_coefficient(t);

    for (int li = 0; li < t.link_count(); ++li) {
        if (d.tiers.link_tier[li] == LinkTier::Bottom)
            fv.bottom_link_penalty +=
                basis.link_load[li] * t.links[li].length_mm * pp.beta * pp.t_cu_ps_per_mm;
    }

    for (int r = 0; r < t.router_count(); ++r) {
        double w = basis.router_load[r];
        if (w == 0.0)
            continue;
        const int p = t.ports(r);
        double excess_ps = 0.0;
        for (StageKind k : kAllStages) {
            StageTier tier = d.tiers.stage(r, k);
            if (tier == StageTier::BT)
                continue;
            double d_tier = stage_cost(k, tier, p, rc.vcs, rc.flit_bits, pp).delay_fo4;
            double d_bt = stage_delay_2d(k, p, rc.vcs, rc.flit_bits);
            // MT can beat BT outright when gamma is large; a negative excess
            // is no penalty, and the feature must stay non-negative.
            excess_ps += std::max(0.0, (d_tier - d_bt) * pp.fo4_ps);
        }
        fv.top_stage_penalty += w * excess_ps;
    }
    return fv;
}

FeatureVector features(const Design &d, const TrafficMatrix &tm, const ProcessParams &pp,
                       const RouterConfig &rc) {
    ValidationReport rep = validate_design(d);
    if (!rep.ok)
        throw ValidationError("features: invalid design: " + rep.summary());
    return features_with_basis(d, make_eval_basis(d, tm), pp, rc);
}

} // namespace m3dnoc
