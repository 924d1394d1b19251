// SPDX-License-Identifier: Apache-2.0

#include "m3dnoc/topo.hpp"
#include "m3dnoc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

namespace m3dnoc {

const char *to_string(TrafficKind k) {
    switch (k) {
    case TrafficKind::Uniform: return "uniform";
    case TrafficKind::Hotspot: return "hotspot";
    case TrafficKind::DistanceDecay: return "distance_decay";
    }
    return "?";
}

TrafficKind parse_traffic_kind(const std::string &s) {
    if (s == "uniform") return TrafficKind::Uniform;
    if (s == "hotspot") return TrafficKind::Hotspot;
    if (s == "distance_decay") return TrafficKind::DistanceDecay;
    throw ValidationError("unknown traffic kind '" + s + "'");
}

int mesh_link_count(const GridSpec &g) {
    return (g.x - 1) * g.y * g.z + g.x * (g.y - 1) * g.z + g.x * g.y * (g.z - 1);
}

namespace {

Link make_link(const GridSpec &g, const std::vector<Coord> &routers, int a, int b) {
    Link l;
    l.a = std::min(a, b);
    l.b = std::max(a, b);
    l.manhattan_len = manhattan_distance(routers[l.a], routers[l.b]);
    l.length_mm = l.manhattan_len * g.hop_pitch_mm;
    return l;
}

} // namespace

Topology gen_mesh(const GridSpec &g, int max_ports) {
    g.validate();
    Topology t;
    t.grid = g;
    t.max_ports = max_ports;
    const int n = g.router_count();
    t.routers.reserve(n);
    for (int r = 0; r < n; ++r)
        t.routers.push_back(g.coord_of(r));
    for (int r = 0; r < n; ++r) {
        Coord c = g.coord_of(r);
        if (c.x + 1 < g.x)
            t.links.push_back(make_link(g, t.routers, r, g.id_of({c.x + 1, c.y, c.z})));
        if (c.y + 1 < g.y)
            t.links.push_back(make_link(g, t.routers, r, g.id_of({c.x, c.y + 1, c.z})));
        if (c.z + 1 < g.z)
            t.links.push_back(make_link(g, t.routers, r, g.id_of({c.x, c.y, c.z + 1})));
    }
    t.core_placement.resize(n);
    std::iota(t.core_placement.begin(), t.core_placement.end(), 0);
    t.rebuild_adjacency();
    return t;
}

Topology gen_smallworld(const GridSpec &g, const SmallWorldSpec &s) {
    g.validate();
    if (!(s.decay_exponent > 0.0))
        throw ValidationError("small-world decay exponent must be positive");
    const int n = g.router_count();
    const int budget = s.link_budget.value_or(mesh_link_count(g));
    if (budget < n - 1)
        throw InfeasibleError("link budget " + std::to_string(budget) +
                              " below spanning-tree minimum " + std::to_string(n - 1));
    const int max_degree = s.max_ports - 1;
    if (static_cast<long long>(budget) * 2 > static_cast<long long>(n) * max_degree)
        throw InfeasibleError("link budget infeasible under degree cap");

    Topology t;
    t.grid = g;
    t.max_ports = s.max_ports;
    t.routers.reserve(n);
    for (int r = 0; r < n; ++r)
        t.routers.push_back(g.coord_of(r));

    std::mt19937_64 rng(s.seed);
    std::vector<int> degree(n, 0);
    std::set<std::pair<int, int>> used;

    // Distance-biased random spanning tree: attach routers in random order,
    // each to an already-attached router sampled with weight d^-eta.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (int i = n - 1; i > 0; --i)
        std::swap(order[i], order[uniform_below(rng, i + 1)]);

    std::vector<int> attached{order[0]};
    std::vector<double> weights;
    for (int i = 1; i < n; ++i) {
        int v = order[i];
        weights.clear();
        double total = 0.0;
        for (int u : attached) {
            double w = degree[u] < max_degree
                           ? std::pow(manhattan_distance(t.routers[u], t.routers[v]),
                                      -s.decay_exponent)
                           : 0.0;
            weights.push_back(w);
            total += w;
        }
        if (total <= 0.0)
            throw InfeasibleError("spanning tree blocked by degree caps");
        double pick = uniform_unit(rng) * total;
        std::size_t idx = 0;
        for (; idx + 1 < weights.size(); ++idx) {
            pick -= weights[idx];
            if (pick < 0.0)
                break;
        }
        int u = attached[idx];
        t.links.push_back(make_link(g, t.routers, u, v));
        used.insert({std::min(u, v), std::max(u, v)});
        degree[u]++;
        degree[v]++;
        attached.push_back(v);
    }

    // Extra links: sample unlinked pairs without replacement, weight d^-eta.
    struct Candidate {
        int a, b;
        double w;
    };
    std::vector<Candidate> cands;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (!used.count({a, b}))
                cands.push_back(
                    {a, b,
                     std::pow(manhattan_distance(t.routers[a], t.routers[b]),
                              -s.decay_exponent)});

    int remaining = budget - (n - 1);
    long long attempts = 0;
    const long long max_attempts = 64LL * budget + 4096;
    while (remaining > 0) {
        if (attempts++ > max_attempts || cands.empty())
            throw InfeasibleError("could not place remaining " + std::to_string(remaining) +
                                  " links under degree caps");
        double total = 0.0;
        for (const auto &c : cands)
            total += c.w;
        double pick = uniform_unit(rng) * total;
        std::size_t idx = 0;
        for (; idx + 1 < cands.size(); ++idx) {
            pick -= cands[idx].w;
            if (pick < 0.0)
                break;
        }
        Candidate c = cands[idx];
        cands.erase(cands.begin() + idx); // without replacement either way
        if (degree[c.a] >= max_degree || degree[c.b] >= max_degree)
            continue;
        t.links.push_back(make_link(g, t.routers, c.a, c.b));
        degree[c.a]++;
        degree[c.b]++;
        remaining--;
    }

    t.core_placement.resize(n);
    std::iota(t.core_placement.begin(), t.core_placement.end(), 0);
    t.rebuild_adjacency();
    return t;
}

TrafficMatrix gen_traffic(const GridSpec &g, const TrafficSpec &ts) {
    g.validate();
    const int n = g.router_count();
    TrafficMatrix tm(n);

    switch (ts.kind) {
    case TrafficKind::Uniform: {
        double w = 1.0 / (n - 1);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j)
                    tm.set(i, j, w);
        break;
    }
    case TrafficKind::Hotspot: {
        if (ts.hotspot_fraction < 0.0 || ts.hotspot_fraction > 1.0)
            throw ValidationError("hotspot_fraction must be in [0, 1]");
        int k = ts.hotspot_count > 0 ? ts.hotspot_count : std::max(1, n / 8);
        if (k >= n)
            throw ValidationError("hotspot_count must be smaller than the core count");
        std::mt19937_64 rng(ts.seed);
        std::vector<int> ids(n);
        std::iota(ids.begin(), ids.end(), 0);
        for (int i = n - 1; i > 0; --i)
            std::swap(ids[i], ids[uniform_below(rng, i + 1)]);
        std::vector<char> hot(n, 0);
        for (int i = 0; i < k; ++i)
            hot[ids[i]] = 1;

        for (int i = 0; i < n; ++i) {
            int hot_others = k - (hot[i] ? 1 : 0);
            int cold_others = (n - 1) - hot_others;
            // a source with no cold destinations sends everything hot, and
            // vice versa; otherwise the row splits h : (1-h)
            double hot_share = hot_others == 0 ? 0.0
                               : cold_others == 0 ? 1.0
                                                  : ts.hotspot_fraction;
            for (int j = 0; j < n; ++j) {
                if (i == j)
                    continue;
                double w = hot[j] ? (hot_others > 0 ? hot_share / hot_others : 0.0)
                                  : (cold_others > 0 ? (1.0 - hot_share) / cold_others : 0.0);
                tm.set(i, j, w);
            }
        }
        break;
    }
    case TrafficKind::DistanceDecay: {
        if (ts.decay_theta < 0.0)
            throw ValidationError("decay_theta must be non-negative");
        for (int i = 0; i < n; ++i) {
            double total = 0.0;
            for (int j = 0; j < n; ++j) {
                if (i == j)
                    continue;
                double w = std::pow(manhattan_distance(g.coord_of(i), g.coord_of(j)),
                                    -ts.decay_theta);
                tm.set(i, j, w);
                total += w;
            }
            for (int j = 0; j < n; ++j)
                if (i != j)
                    tm.set(i, j, tm.at(i, j) / total);
        }
        break;
    }
    }

    tm.validate();
    return tm;
}

TrafficMatrix load_traffic_csv(const std::string &path, int n_cores) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open traffic file '" + path + "'");
    std::string line;
    if (!std::getline(in, line))
        throw ValidationError("traffic file '" + path + "' is empty");
    // tolerate a trailing carriage return from CRLF files
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line != "src,dst,weight")
        throw ValidationError("traffic file header must be 'src,dst,weight', got '" + line + "'");

    TrafficMatrix tm(n_cores);
    std::set<std::pair<int, int>> seen;
    int line_no = 1;
    while (std::getline(in, line)) {
        line_no++;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        std::istringstream ss(line);
        std::string a, b, c;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c))
            throw ValidationError("malformed row at line " + std::to_string(line_no));
        int src, dst;
        double w;
        try {
            std::size_t pa, pb, pc;
            src = std::stoi(a, &pa);
            dst = std::stoi(b, &pb);
            w = std::stod(c, &pc);
            if (pa != a.size() || pb != b.size() || pc != c.size())
                throw std::invalid_argument("trailing characters");
        } catch (const std::exception &) {
            throw ValidationError("malformed row at line " + std::to_string(line_no));
        }
        if (src < 0 || src >= n_cores || dst < 0 || dst >= n_cores)
            throw ValidationError("core index out of range at line " + std::to_string(line_no));
        if (src == dst)
            throw ValidationError("self-traffic at line " + std::to_string(line_no));
        if (w < 0.0)
            throw ValidationError("negative weight at line " + std::to_string(line_no));
        if (!seen.insert({src, dst}).second)
            throw ValidationError("duplicate pair (" + std::to_string(src) + "," +
                                  std::to_string(dst) + ") at line " + std::to_string(line_no));
        tm.set(src, dst, w);
    }
    tm.validate();
    return tm;
}

} // namespace m3dnoc
