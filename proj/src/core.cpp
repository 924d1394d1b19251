// SPDX-License-Identifier: Apache-2.0

#include "m3dnoc/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>
#include <sstream>

namespace m3dnoc {

int manhattan_distance(const Coord &a, const Coord &b) {
    return std::abs(a.x - b.x) + std::abs(a.y - b.y) + std::abs(a.z - b.z);
}

Coord GridSpec::coord_of(int router_id) const {
    Coord c;
    c.x = router_id % x;
    c.y = (router_id / x) % y;
    c.z = router_id / (x * y);
    return c;
}

int GridSpec::id_of(const Coord &c) const { return c.x + x * (c.y + y * c.z); }

void GridSpec::validate() const {
    if (x < 1 || y < 1 || z < 1)
        throw ValidationError("grid dimensions must be positive");
    if (router_count() < 2)
        throw ValidationError("grid must contain at least 2 routers");
    if (!(hop_pitch_mm > 0.0))
        throw ValidationError("hop_pitch_mm must be positive");
}

void RouterConfig::validate() const {
    if (vcs < 1)
        throw ValidationError("router vcs must be >= 1");
    if (flit_bits < 1)
        throw ValidationError("router flit_bits must be >= 1");
    if (flits_per_packet < 1)
        throw ValidationError("router flits_per_packet must be >= 1");
    if (max_ports < 2)
        throw ValidationError("router max_ports must be >= 2");
}

const char *to_string(StageTier t) {
    switch (t) {
    case StageTier::BT: return "BT";
    case StageTier::TT: return "TT";
    case StageTier::MT: return "MT";
    }
    return "?";
}

const char *to_string(LinkTier t) { return t == LinkTier::Top ? "top" : "bottom"; }

const char *to_string(StageKind k) {
    switch (k) {
    case StageKind::VCA: return "VCA";
    case StageKind::SWA: return "SWA";
    case StageKind::XBAR: return "XBAR";
    }
    return "?";
}

StageTier parse_stage_tier(const std::string &s) {
    if (s == "BT") return StageTier::BT;
    if (s == "TT") return StageTier::TT;
    if (s == "MT") return StageTier::MT;
    throw ValidationError("unknown stage tier '" + s + "'");
}

LinkTier parse_link_tier(const std::string &s) {
    if (s == "top") return LinkTier::Top;
    if (s == "bottom") return LinkTier::Bottom;
    throw ValidationError("unknown link tier '" + s + "'");
}

const char *to_string(TopologyKind k) { return k == TopologyKind::Mesh ? "mesh" : "smallworld"; }

TopologyKind parse_topology_kind(const std::string &s) {
    if (s == "mesh") return TopologyKind::Mesh;
    if (s == "smallworld") return TopologyKind::SmallWorld;
    throw ValidationError("unknown topology kind '" + s + "'");
}

void Topology::rebuild_adjacency() {
    nbrs_.assign(routers.size(), {});
    for (int li = 0; li < link_count(); ++li) {
        const Link &l = links[li];
        nbrs_[l.a].emplace_back(l.b, li);
        nbrs_[l.b].emplace_back(l.a, li);
    }
    for (auto &n : nbrs_)
        std::sort(n.begin(), n.end());
}

void TrafficMatrix::scale(double c) {
    for (auto &v : f_)
        v *= c;
}

double TrafficMatrix::total() const {
    double s = 0.0;
    for (double v : f_)
        s += v;
    return s;
}

void TrafficMatrix::validate() const {
    bool any_positive = false;
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
            double v = at(i, j);
            if (v < 0.0 || !std::isfinite(v))
                throw ValidationError("traffic entry (" + std::to_string(i) + "," +
                                      std::to_string(j) + ") must be a finite non-negative value");
            if (i == j && v != 0.0)
                throw ValidationError("self-traffic at core " + std::to_string(i));
            if (v > 0.0)
                any_positive = true;
        }
    }
    if (!any_positive)
        throw ValidationError("traffic matrix has no positive entry");
}

ProcessParams ProcessParams::ideal() const {
    ProcessParams p = *this;
    p.alpha = 0.0;
    p.beta = 0.0;
    p.beta_e.reset();
    return p;
}

void ProcessParams::validate() const {
    if (alpha < 0.0 || alpha > 0.5)
        throw ValidationError("alpha must be in [0, 0.5]");
    if (beta < 0.0 || beta > 1.0)
        throw ValidationError("beta must be in [0, 1]");
    if (gamma < 0.0 || gamma >= 1.0)
        throw ValidationError("gamma must be in [0, 1)");
    if (tiers < 1)
        throw ValidationError("tiers must be >= 1");
    for (double r : wire_frac)
        if (r < 0.0 || r > 1.0)
            throw ValidationError("wire_frac entries must be in [0, 1]");
    if (!(fo4_slope >= 0.0) || !(cap_slope >= 0.0))
        throw ValidationError("model slopes must be non-negative");
    if (!(t_cu_ps_per_mm > 0.0) || !(e_cu_pj_per_mm > 0.0) || !(fo4_ps > 0.0) || !(e0_pj > 0.0))
        throw ValidationError("unit constants must be positive");
    if (beta_e.has_value() && (*beta_e < 0.0 || *beta_e > 1.0))
        throw ValidationError("beta_e must be in [0, 1]");
}

std::string ValidationReport::summary() const {
    if (ok)
        return "ok";
    std::ostringstream os;
    os << violations.size() << " violation(s):";
    for (const auto &v : violations)
        os << "\n  [" << v.code << "] " << v.message;
    return os.str();
}

namespace {

void add(ValidationReport &r, std::string code, std::string msg) {
    r.ok = false;
    r.violations.push_back({std::move(code), std::move(msg)});
}

bool stage_allows_link(StageTier st, LinkTier lt) {
    if (st == StageTier::MT)
        return true;
    return lt == LinkTier::Top ? st == StageTier::TT : st == StageTier::BT;
}

} // namespace

ValidationReport validate_design(const Design &d) {
    ValidationReport rep;
    const Topology &t = d.topology;
    const int n = t.router_count();

    try {
        t.grid.validate();
    } catch (const ValidationError &e) {
        add(rep, "grid", e.what());
        return rep;
    }
    if (n != t.grid.router_count())
        add(rep, "grid", "router count " + std::to_string(n) + " does not match grid size " +
                             std::to_string(t.grid.router_count()));
    for (int r = 0; r < n; ++r) {
        const Coord &c = t.routers[r];
        if (c.x < 0 || c.x >= t.grid.x || c.y < 0 || c.y >= t.grid.y || c.z < 0 ||
            c.z >= t.grid.z)
            add(rep, "grid", "router " + std::to_string(r) + " coordinate out of grid bounds");
    }

    // placement must be a core -> router bijection
    if (static_cast<int>(t.core_placement.size()) != n) {
        add(rep, "placement", "core_placement size does not match router count");
    } else {
        std::vector<int> seen(n, 0);
        for (int c = 0; c < n; ++c) {
            int r = t.core_placement[c];
            if (r < 0 || r >= n) {
                add(rep, "placement", "core " + std::to_string(c) + " mapped out of range");
            } else if (seen[r]++) {
                add(rep, "placement", "router " + std::to_string(r) + " hosts multiple cores");
            }
        }
    }

    // links: range, self, duplicate, Manhattan-length consistency
    std::set<std::pair<int, int>> pairs;
    std::vector<int> degree(n, 0);
    for (int li = 0; li < t.link_count(); ++li) {
        const Link &l = t.links[li];
        if (l.a < 0 || l.a >= n || l.b < 0 || l.b >= n) {
            add(rep, "link", "link " + std::to_string(li) + " endpoint out of range");
            continue;
        }
        if (l.a == l.b) {
            add(rep, "self-link", "link " + std::to_string(li) + " connects router " +
                                      std::to_string(l.a) + " to itself");
            continue;
        }
        std::pair<int, int> p{std::min(l.a, l.b), std::max(l.a, l.b)};
        if (!pairs.insert(p).second)
            add(rep, "duplicate-link", "link " + std::to_string(li) + " duplicates pair (" +
                                           std::to_string(p.first) + "," +
                                           std::to_string(p.second) + ")");
        degree[l.a]++;
        degree[l.b]++;
        int md = manhattan_distance(t.routers[l.a], t.routers[l.b]);
        if (l.manhattan_len != md)
            add(rep, "manhattan-length",
                "link " + std::to_string(li) + " stores length " +
                    std::to_string(l.manhattan_len) + " but endpoints are " + std::to_string(md) +
                    " apart");
        double expect_mm = l.manhattan_len * t.grid.hop_pitch_mm;
        if (std::abs(l.length_mm - expect_mm) > 1e-9 * std::max(1.0, expect_mm))
            add(rep, "manhattan-length",
                "link " + std::to_string(li) + " length_mm inconsistent with hop pitch");
    }

    for (int r = 0; r < n; ++r)
        if (degree[r] > t.max_ports - 1)
            add(rep, "degree", "router " + std::to_string(r) + " degree " +
                                   std::to_string(degree[r]) + " exceeds max_ports-1 = " +
                                   std::to_string(t.max_ports - 1));

    // connectivity over the declared links
    {
        std::vector<std::vector<int>> adj(n);
        for (const Link &l : t.links) {
            if (l.a >= 0 && l.a < n && l.b >= 0 && l.b < n && l.a != l.b) {
                adj[l.a].push_back(l.b);
                adj[l.b].push_back(l.a);
            }
        }
        std::vector<char> vis(n, 0);
        std::vector<int> stack{0};
        vis[0] = 1;
        int count = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int v : adj[u])
                if (!vis[v]) {
                    vis[v] = 1;
                    count++;
                    stack.push_back(v);
                }
        }
        if (count != n) {
            for (int r = 0; r < n; ++r)
                if (!vis[r]) {
                    add(rep, "connectivity",
                        "router " + std::to_string(r) + " unreachable from router 0");
                    break; // one representative is enough
                }
        }
    }

    // mesh designs must be in canonical grid form: router r at coord_of(r) and
    // exactly the unit-neighbor links (XYZ routing walks that structure)
    if (d.kind == TopologyKind::Mesh) {
        bool canonical = true;
        for (int r = 0; r < n && canonical; ++r)
            canonical = t.routers[r] == t.grid.coord_of(r);
        if (!canonical) {
            add(rep, "mesh-structure", "mesh routers are not in canonical grid order");
        } else {
            int expected = 0;
            bool complete = true;
            for (int r = 0; r < n; ++r) {
                Coord c = t.grid.coord_of(r);
                for (Coord nb : {Coord{c.x + 1, c.y, c.z}, Coord{c.x, c.y + 1, c.z},
                                 Coord{c.x, c.y, c.z + 1}}) {
                    if (nb.x >= t.grid.x || nb.y >= t.grid.y || nb.z >= t.grid.z)
                        continue;
                    expected++;
                    int other = t.grid.id_of(nb);
                    if (!pairs.count({std::min(r, other), std::max(r, other)}))
                        complete = false;
                }
            }
            if (!complete || static_cast<int>(pairs.size()) != expected)
                add(rep, "mesh-structure",
                    "mesh links must be exactly the unit-distance neighbor pairs");
        }
    }

    // tier assignment shapes
    if (static_cast<int>(d.tiers.stage_tier.size()) != n)
        add(rep, "tiers", "stage_tier size does not match router count");
    if (d.tiers.link_tier.size() != t.links.size())
        add(rep, "tiers", "link_tier size does not match link count");

    // tier compatibility: SWA and VCA of both endpoints must admit the link tier
    if (static_cast<int>(d.tiers.stage_tier.size()) == n &&
        d.tiers.link_tier.size() == t.links.size()) {
        for (int li = 0; li < t.link_count(); ++li) {
            const Link &l = t.links[li];
            if (l.a < 0 || l.a >= n || l.b < 0 || l.b >= n || l.a == l.b)
                continue;
            LinkTier lt = d.tiers.link_tier[li];
            for (int r : {l.a, l.b}) {
                for (StageKind k : {StageKind::SWA, StageKind::VCA}) {
                    if (!stage_allows_link(d.tiers.stage(r, k), lt))
                        add(rep, "tier-compatibility",
                            std::string("link ") + std::to_string(li) + " (" + to_string(lt) +
                                ") incompatible with " + to_string(k) + " stage of router " +
                                std::to_string(r) + " (" + to_string(d.tiers.stage(r, k)) + ")");
                }
            }
        }
    }

    return rep;
}

double clustering_coefficient(const Topology &t) {
    const int n = t.router_count();
    if (n < 3)
        throw std::invalid_argument("clustering_coefficient requires at least 3 routers");

    // sorted neighbor sets without link ids
    std::vector<std::vector<int>> nb(n);
    for (const Link &l : t.links) {
        nb[l.a].push_back(l.b);
        nb[l.b].push_back(l.a);
    }
    for (auto &v : nb)
        std::sort(v.begin(), v.end());

    double sum = 0.0;
    for (int r = 0; r < n; ++r) {
        const auto &ns = nb[r];
        std::size_t deg = ns.size();
        if (deg < 2)
            continue;
        int tri = 0;
        for (std::size_t i = 0; i < deg; ++i)
            for (std::size_t j = i + 1; j < deg; ++j)
                if (std::binary_search(nb[ns[i]].begin(), nb[ns[i]].end(), ns[j]))
                    tri++;
        sum += 2.0 * tri / (static_cast<double>(deg) * (deg - 1));
    }
    return sum / n;
}

} // namespace m3dnoc
