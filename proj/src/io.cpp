// SPDX-License-Identifier: Apache-2.0

#include "m3dnoc/io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace fs = std::filesystem;

namespace m3dnoc {

std::string fmt_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_out(const fs::path &p) {
    std::ofstream out(p, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write '" + p.string() + "'");
    return out;
}

std::ifstream open_in(const fs::path &p) {
    std::ifstream in(p);
    if (!in)
        throw ValidationError("cannot open '" + p.string() + "'");
    return in;
}

std::vector<std::string> split_csv(const std::string &line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ','))
        out.push_back(field);
    return out;
}

// reads a CSV with an exact header; returns rows of fields
std::vector<std::vector<std::string>> read_rows(const fs::path &p, const std::string &header) {
    std::ifstream in = open_in(p);
    std::string line;
    if (!std::getline(in, line))
        throw ValidationError("'" + p.string() + "' is empty");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line != header)
        throw ValidationError("'" + p.string() + "': expected header '" + header + "', got '" +
                              line + "'");
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        rows.push_back(split_csv(line));
    }
    return rows;
}

int to_int(const std::string &s, const char *what) {
    try {
        std::size_t pos;
        int v = std::stoi(s, &pos);
        if (pos != s.size())
            throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception &) {
        throw ValidationError(std::string("bad ") + what + " value '" + s + "'");
    }
}

double to_double(const std::string &s, const char *what) {
    try {
        std::size_t pos;
        double v = std::stod(s, &pos);
        if (pos != s.size())
            throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception &) {
        throw ValidationError(std::string("bad ") + what + " value '" + s + "'");
    }
}

void write_meta(const fs::path &dir, const Topology &t, TopologyKind kind) {
    auto out = open_out(dir / "meta.csv");
    out << "key,value\n";
    out << "kind," << to_string(kind) << "\n";
    out << "grid_x," << t.grid.x << "\n";
    out << "grid_y," << t.grid.y << "\n";
    out << "grid_z," << t.grid.z << "\n";
    out << "hop_pitch_mm," << fmt_double(t.grid.hop_pitch_mm) << "\n";
    out << "max_ports," << t.max_ports << "\n";
}

void write_routers(const fs::path &dir, const Topology &t) {
    auto out = open_out(dir / "routers.csv");
    out << "router_id,x,y,z\n";
    for (int r = 0; r < t.router_count(); ++r)
        out << r << "," << t.routers[r].x << "," << t.routers[r].y << "," << t.routers[r].z
            << "\n";
}

void write_links(const fs::path &dir, const Topology &t) {
    auto out = open_out(dir / "links.csv");
    out << "link_id,router_a,router_b,manhattan_len\n";
    for (int li = 0; li < t.link_count(); ++li)
        out << li << "," << t.links[li].a << "," << t.links[li].b << ","
            << t.links[li].manhattan_len << "\n";
}

void write_placement(const fs::path &dir, const Topology &t) {
    auto out = open_out(dir / "placement.csv");
    out << "core_id,router_id\n";
    for (std::size_t c = 0; c < t.core_placement.size(); ++c)
        out << c << "," << t.core_placement[c] << "\n";
}

} // namespace

void write_topology(const std::string &dir, const Topology &t, TopologyKind kind) {
    fs::create_directories(dir);
    write_meta(dir, t, kind);
    write_routers(dir, t);
    write_links(dir, t);
    write_placement(dir, t);
}

void write_design(const std::string &dir, const Design &d) {
    write_topology(dir, d.topology, d.kind);
    fs::path p(dir);
    {
        auto out = open_out(p / "stage_tiers.csv");
        out << "router_id,vca,swa,xbar\n";
        for (int r = 0; r < d.topology.router_count(); ++r)
            out << r << "," << to_string(d.tiers.stage(r, StageKind::VCA)) << ","
                << to_string(d.tiers.stage(r, StageKind::SWA)) << ","
                << to_string(d.tiers.stage(r, StageKind::XBAR)) << "\n";
    }
    {
        auto out = open_out(p / "link_tiers.csv");
        out << "link_id,tier\n";
        for (int li = 0; li < d.topology.link_count(); ++li)
            out << li << "," << to_string(d.tiers.link_tier[li]) << "\n";
    }
}

Design load_design(const std::string &dir) {
    fs::path p(dir);

    std::map<std::string, std::string> meta;
    for (const auto &row : read_rows(p / "meta.csv", "key,value")) {
        if (row.size() != 2)
            throw ValidationError("meta.csv: malformed row");
        meta[row[0]] = row[1];
    }
    auto need = [&](const char *key) {
        auto it = meta.find(key);
        if (it == meta.end())
            throw ValidationError(std::string("meta.csv missing key '") + key + "'");
        return it->second;
    };

    Design d;
    d.kind = parse_topology_kind(need("kind"));
    Topology &t = d.topology;
    t.grid.x = to_int(need("grid_x"), "grid_x");
    t.grid.y = to_int(need("grid_y"), "grid_y");
    t.grid.z = to_int(need("grid_z"), "grid_z");
    t.grid.hop_pitch_mm = to_double(need("hop_pitch_mm"), "hop_pitch_mm");
    t.max_ports = to_int(need("max_ports"), "max_ports");

    auto router_rows = read_rows(p / "routers.csv", "router_id,x,y,z");
    t.routers.resize(router_rows.size());
    for (const auto &row : router_rows) {
        if (row.size() != 4)
            throw ValidationError("routers.csv: malformed row");
        int id = to_int(row[0], "router_id");
        if (id < 0 || id >= static_cast<int>(t.routers.size()))
            throw ValidationError("routers.csv: router_id out of range");
        t.routers[id] = {to_int(row[1], "x"), to_int(row[2], "y"), to_int(row[3], "z")};
    }

    auto link_rows = read_rows(p / "links.csv", "link_id,router_a,router_b,manhattan_len");
    t.links.resize(link_rows.size());
    for (const auto &row : link_rows) {
        if (row.size() != 4)
            throw ValidationError("links.csv: malformed row");
        int id = to_int(row[0], "link_id");
        if (id < 0 || id >= static_cast<int>(t.links.size()))
            throw ValidationError("links.csv: link_id out of range");
        Link l;
        l.a = to_int(row[1], "router_a");
        l.b = to_int(row[2], "router_b");
        l.manhattan_len = to_int(row[3], "manhattan_len");
        l.length_mm = l.manhattan_len * t.grid.hop_pitch_mm;
        t.links[id] = l;
    }

    auto place_rows = read_rows(p / "placement.csv", "core_id,router_id");
    t.core_placement.resize(place_rows.size());
    for (const auto &row : place_rows) {
        if (row.size() != 2)
            throw ValidationError("placement.csv: malformed row");
        int core = to_int(row[0], "core_id");
        if (core < 0 || core >= static_cast<int>(t.core_placement.size()))
            throw ValidationError("placement.csv: core_id out of range");
        t.core_placement[core] = to_int(row[1], "router_id");
    }
    t.rebuild_adjacency();

    // tier files are optional: generate emits topology-only directories
    if (fs::exists(p / "stage_tiers.csv")) {
        auto rows = read_rows(p / "stage_tiers.csv", "router_id,vca,swa,xbar");
        d.tiers.stage_tier.resize(rows.size());
        for (const auto &row : rows) {
            if (row.size() != 4)
                throw ValidationError("stage_tiers.csv: malformed row");
            int id = to_int(row[0], "router_id");
            if (id < 0 || id >= static_cast<int>(d.tiers.stage_tier.size()))
                throw ValidationError("stage_tiers.csv: router_id out of range");
            d.tiers.stage_tier[id] = {parse_stage_tier(row[1]), parse_stage_tier(row[2]),
                                      parse_stage_tier(row[3])};
        }
        auto lt_rows = read_rows(p / "link_tiers.csv", "link_id,tier");
        d.tiers.link_tier.resize(lt_rows.size());
        for (const auto &row : lt_rows) {
            if (row.size() != 2)
                throw ValidationError("link_tiers.csv: malformed row");
            int id = to_int(row[0], "link_id");
            if (id < 0 || id >= static_cast<int>(d.tiers.link_tier.size()))
                throw ValidationError("link_tiers.csv: link_id out of range");
            d.tiers.link_tier[id] = parse_link_tier(row[1]);
        }
    }
    return d;
}

void write_traffic_csv(const std::string &path, const TrafficMatrix &tm) {
    auto out = open_out(path);
    out << "src,dst,weight\n";
    for (int i = 0; i < tm.size(); ++i)
        for (int j = 0; j < tm.size(); ++j)
            if (tm.at(i, j) != 0.0)
                out << i << "," << j << "," << fmt_double(tm.at(i, j)) << "\n";
}

void write_result_csv(const std::string &path, const std::string &design_id,
                      const ProcessParams &pp, const EvalResult &r) {
    auto out = open_out(path);
    out << "design_id,alpha,beta,gamma,latency_ps,energy_pj,edp\n";
    out << design_id << "," << fmt_double(pp.alpha) << "," << fmt_double(pp.beta) << ","
        << fmt_double(pp.gamma) << "," << fmt_double(r.latency_ps) << ","
        << fmt_double(r.energy_pj) << "," << fmt_double(r.edp) << "\n";
}

void write_history_csv(const std::string &path, const std::vector<HistoryRow> &history) {
    auto out = open_out(path);
    out << "iteration,step,best_edp,dataset_rows\n";
    for (const HistoryRow &h : history)
        out << h.iteration << "," << h.step << "," << fmt_double(h.best_edp) << ","
            << h.dataset_rows << "\n";
}

} // namespace m3dnoc
