// SPDX-License-Identifier: Apache-2.0

#include "m3dnoc/search.hpp"
#include "m3dnoc/topo.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>

using namespace m3dnoc;
namespace fs = std::filesystem;

namespace {

Design with_po_tiers(Topology t, TopologyKind kind) { return po_baseline(std::move(t), kind); }

std::string write_temp(const std::string &name, const std::string &content) {
    fs::path p = fs::temp_directory_path() / name;
    std::ofstream out(p);
    out << content;
    return p.string();
}

} // namespace

TEST_CASE("mesh generation counts") {
    Topology m = gen_mesh({4, 4, 4, 1.0});
    CHECK(m.router_count() == 64);
    CHECK(m.link_count() == 144);
    CHECK(mesh_link_count({4, 4, 4, 1.0}) == 144);

    Topology s = gen_mesh({2, 2, 1, 1.0});
    CHECK(s.router_count() == 4);
    CHECK(s.link_count() == 4);

    CHECK_THROWS_AS(gen_mesh({1, 1, 1, 1.0}), ValidationError);

    CHECK(validate_design(with_po_tiers(m, TopologyKind::Mesh)).ok);
}

TEST_CASE("small-world generation respects budget, caps and determinism") {
    GridSpec g{4, 4, 1, 1.0};
    SmallWorldSpec sw;
    sw.seed = 7;

    Topology t = gen_smallworld(g, sw);
    CHECK(t.link_count() == mesh_link_count(g)); // default budget
    CHECK(validate_design(with_po_tiers(t, TopologyKind::SmallWorld)).ok);
    for (int r = 0; r < t.router_count(); ++r)
        CHECK(t.degree(r) <= sw.max_ports - 1);

    // spanning tree only
    SmallWorldSpec tree = sw;
    tree.link_budget = g.router_count() - 1;
    Topology tt = gen_smallworld(g, tree);
    CHECK(tt.link_count() == g.router_count() - 1);
    CHECK(validate_design(with_po_tiers(tt, TopologyKind::SmallWorld)).ok);

    // determinism
    Topology t2 = gen_smallworld(g, sw);
    REQUIRE(t2.link_count() == t.link_count());
    for (int li = 0; li < t.link_count(); ++li) {
        CHECK(t.links[li].a == t2.links[li].a);
        CHECK(t.links[li].b == t2.links[li].b);
    }

    // infeasible budgets
    SmallWorldSpec tiny = sw;
    tiny.link_budget = 3;
    CHECK_THROWS_AS(gen_smallworld(g, tiny), InfeasibleError);
    SmallWorldSpec huge = sw;
    huge.link_budget = 200; // 16 routers * 6 / 2 = 48 max
    CHECK_THROWS_AS(gen_smallworld(g, huge), InfeasibleError);
}

TEST_CASE("small-world link lengths concentrate at short range as eta grows") {
    GridSpec g{6, 6, 1, 1.0};
    auto unit_fraction = [&](double eta) {
        double total = 0.0;
        for (std::uint64_t seed = 1; seed <= 30; ++seed) {
            SmallWorldSpec sw;
            sw.decay_exponent = eta;
            sw.seed = seed;
            Topology t = gen_smallworld(g, sw);
            int unit = 0;
            for (const Link &l : t.links)
                if (l.manhattan_len == 1)
                    unit++;
            total += static_cast<double>(unit) / t.link_count();
        }
        return total / 30.0;
    };
    double f05 = unit_fraction(0.5);
    double f2 = unit_fraction(2.0);
    double f6 = unit_fraction(6.0);
    CHECK(f2 > f05);
    CHECK(f6 > f2);
}

TEST_CASE("small-world length histogram is non-increasing on average for eta >= 2") {
    GridSpec g{8, 8, 1, 1.0};
    std::map<int, double> histogram;
    const int seeds = 120;
    for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
        SmallWorldSpec sw;
        sw.seed = seed;
        sw.decay_exponent = 2.0;
        Topology t = gen_smallworld(g, sw);
        for (const Link &l : t.links)
            histogram[l.manhattan_len] += 1.0 / seeds;
    }
    // compare bins with real mass; allow sampling noise in the tail
    int max_len = histogram.rbegin()->first;
    double prev = histogram[1];
    for (int len = 2; len <= max_len; ++len) {
        double cur = histogram.count(len) ? histogram[len] : 0.0;
        if (prev >= 1.0) {
            double margin = 3.0 * std::sqrt((prev + cur) / seeds) + 0.05;
            CHECK(cur <= prev + margin);
        }
        prev = cur;
    }
}

TEST_CASE("uniform traffic rows") {
    TrafficMatrix tm = gen_traffic({2, 2, 1, 1.0}, TrafficSpec{});
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(tm.at(i, j) == doctest::Approx(i == j ? 0.0 : 1.0 / 3.0));
}

TEST_CASE("distance decay traffic") {
    GridSpec g{8, 8, 1, 1.0};

    SUBCASE("theta = 0 degenerates to uniform") {
        TrafficSpec ts;
        ts.kind = TrafficKind::DistanceDecay;
        ts.decay_theta = 0.0;
        TrafficMatrix tm = gen_traffic(g, ts);
        for (int j = 1; j < 64; ++j)
            CHECK(tm.at(0, j) == doctest::Approx(1.0 / 63.0));
    }

    SUBCASE("default theta puts most weight at distance 1") {
        TrafficSpec ts;
        ts.kind = TrafficKind::DistanceDecay;
        TrafficMatrix tm = gen_traffic(g, ts);
        double at_one = 0.0, total = 0.0;
        for (int i = 0; i < 64; ++i)
            for (int j = 0; j < 64; ++j) {
                if (i == j)
                    continue;
                total += tm.at(i, j);
                if (manhattan_distance(g.coord_of(i), g.coord_of(j)) == 1)
                    at_one += tm.at(i, j);
            }
        CHECK(at_one / total >= 0.70);
    }

    SUBCASE("weight histogram matches direct enumeration") {
        TrafficSpec ts;
        ts.kind = TrafficKind::DistanceDecay;
        ts.decay_theta = 2.0;
        TrafficMatrix tm = gen_traffic(g, ts);
        // independent recomputation of the expected distance distribution
        std::map<int, double> expect, got;
        for (int i = 0; i < 64; ++i) {
            double row = 0.0;
            std::map<int, double> row_by_dist;
            for (int j = 0; j < 64; ++j) {
                if (i == j)
                    continue;
                int dist = manhattan_distance(g.coord_of(i), g.coord_of(j));
                double w = std::pow(dist, -2.0);
                row += w;
                row_by_dist[dist] += w;
            }
            for (auto &[dist, w] : row_by_dist)
                expect[dist] += w / row;
            for (int j = 0; j < 64; ++j)
                if (i != j)
                    got[manhattan_distance(g.coord_of(i), g.coord_of(j))] += tm.at(i, j);
        }
        for (auto &[dist, w] : expect)
            CHECK(got[dist] == doctest::Approx(w).epsilon(0.05));
    }
}

TEST_CASE("hotspot traffic sends the configured share to hot cores") {
    GridSpec g{4, 4, 1, 1.0};
    TrafficSpec ts;
    ts.kind = TrafficKind::Hotspot;
    ts.hotspot_fraction = 0.6;
    ts.hotspot_count = 2;
    ts.seed = 5;
    TrafficMatrix tm = gen_traffic(g, ts);
    tm.validate();

    // identify hot cores as the two columns with the highest received weight
    std::vector<std::pair<double, int>> recv;
    for (int j = 0; j < 16; ++j) {
        double s = 0.0;
        for (int i = 0; i < 16; ++i)
            s += tm.at(i, j);
        recv.push_back({s, j});
    }
    std::sort(recv.rbegin(), recv.rend());
    double hot_total = 0.0, total = 0.0;
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) {
            total += tm.at(i, j);
            if (j == recv[0].second || j == recv[1].second)
                hot_total += tm.at(i, j);
        }
    CHECK(hot_total / total == doctest::Approx(0.6).epsilon(0.05));

    // determinism
    TrafficMatrix tm2 = gen_traffic(g, ts);
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j)
            CHECK(tm.at(i, j) == tm2.at(i, j));
}

TEST_CASE("traffic csv loading") {
    SUBCASE("valid file") {
        std::string p = write_temp("m3d_traffic_ok.csv", "src,dst,weight\n0,1,2.5\n");
        TrafficMatrix tm = load_traffic_csv(p, 2);
        CHECK(tm.at(0, 1) == 2.5);
        CHECK(tm.at(1, 0) == 0.0);
    }
    SUBCASE("self traffic") {
        std::string p = write_temp("m3d_traffic_self.csv", "src,dst,weight\n0,0,1.0\n");
        CHECK_THROWS_WITH_AS(load_traffic_csv(p, 2), doctest::Contains("self-traffic"),
                             ValidationError);
    }
    SUBCASE("duplicate pair") {
        std::string p =
            write_temp("m3d_traffic_dup.csv", "src,dst,weight\n0,1,1.0\n0,1,2.0\n");
        CHECK_THROWS_WITH_AS(load_traffic_csv(p, 2), doctest::Contains("duplicate pair"),
                             ValidationError);
    }
    SUBCASE("negative weight") {
        std::string p = write_temp("m3d_traffic_neg.csv", "src,dst,weight\n0,1,-1.0\n");
        CHECK_THROWS_WITH_AS(load_traffic_csv(p, 2), doctest::Contains("negative"),
                             ValidationError);
    }
    SUBCASE("out of range index") {
        std::string p = write_temp("m3d_traffic_oob.csv", "src,dst,weight\n0,5,1.0\n");
        CHECK_THROWS_WITH_AS(load_traffic_csv(p, 2), doctest::Contains("out of range"),
                             ValidationError);
    }
    SUBCASE("malformed row") {
        std::string p = write_temp("m3d_traffic_bad.csv", "src,dst,weight\n0,not_a_number\n");
        CHECK_THROWS_WITH_AS(load_traffic_csv(p, 2), doctest::Contains("malformed"),
                             ValidationError);
    }
    SUBCASE("wrong header") {
        std::string p = write_temp("m3d_traffic_hdr.csv", "a,b,c\n0,1,1.0\n");
        CHECK_THROWS_AS(load_traffic_csv(p, 2), ValidationError);
    }
}
