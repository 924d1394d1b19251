// SPDX-License-Identifier: Apache-2.0

#include "m3dnoc/config.hpp"
#include "m3dnoc/rng.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

using nlohmann::json;

namespace m3dnoc {

namespace {

constexpr std::uint64_t kTrafficTag = 0x7472616666696331ULL;

template <typename T> void get_if_present(const json &j, const char *key, T &out) {
    if (j.contains(key) && !j.at(key).is_null())
        out = j.at(key).get<T>();
}

void parse_grid(const json &j, GridSpec &g) {
    get_if_present(j, "x", g.x);
    get_if_present(j, "y", g.y);
    get_if_present(j, "z", g.z);
    get_if_present(j, "hop_pitch_mm", g.hop_pitch_mm);
}

void parse_router(const json &j, RouterConfig &r) {
    get_if_present(j, "vcs", r.vcs);
    get_if_present(j, "flit_bits", r.flit_bits);
    get_if_present(j, "flits_per_packet", r.flits_per_packet);
    get_if_present(j, "max_ports", r.max_ports);
}

void parse_process(const json &j, ProcessParams &p) {
    get_if_present(j, "alpha", p.alpha);
    get_if_present(j, "beta", p.beta);
    get_if_present(j, "gamma", p.gamma);
    get_if_present(j, "tiers", p.tiers);
    get_if_present(j, "fo4_slope", p.fo4_slope);
    get_if_present(j, "cap_slope", p.cap_slope);
    if (j.contains("wire_frac") && !j.at("wire_frac").is_null()) {
        const json &w = j.at("wire_frac");
        get_if_present(w, "vca", p.wire_frac[static_cast<int>(StageKind::VCA)]);
        get_if_present(w, "swa", p.wire_frac[static_cast<int>(StageKind::SWA)]);
        get_if_present(w, "xbar", p.wire_frac[static_cast<int>(StageKind::XBAR)]);
    }
    get_if_present(j, "t_cu_ps_per_mm", p.t_cu_ps_per_mm);
    get_if_present(j, "e_cu_pj_per_mm", p.e_cu_pj_per_mm);
    get_if_present(j, "fo4_ps", p.fo4_ps);
    get_if_present(j, "e0_pj", p.e0_pj);
    if (j.contains("beta_e") && !j.at("beta_e").is_null())
        p.beta_e = j.at("beta_e").get<double>();
}

void parse_search(const json &j, SearchConfig &s) {
    get_if_present(j, "iter_max", s.iter_max);
    get_if_present(j, "patience", s.patience);
    get_if_present(j, "n_trees", s.n_trees);
    get_if_present(j, "max_depth", s.max_depth);
    get_if_present(j, "min_leaf", s.min_leaf);
    get_if_present(j, "perturb_retries", s.perturb_retries);
    get_if_present(j, "optimize_layout", s.optimize_layout);
    if (j.contains("mode") && !j.at("mode").is_null())
        s.mode = parse_search_mode(j.at("mode").get<std::string>());
}

} // namespace

void ExperimentConfig::validate() const {
    try {
        grid.validate();
        router.validate();
        process.validate();
        search.validate();
    } catch (const ValidationError &e) {
        throw ConfigError(e.what());
    }
    if (sweep.alphas.empty() || sweep.betas.empty() || sweep.gammas.empty())
        throw ConfigError("sweep lists must be non-empty");
    if (sweep.n_seeds < 1)
        throw ConfigError("sweep n_seeds must be >= 1");
    ProcessParams probe = process;
    for (double a : sweep.alphas)
        for (double b : sweep.betas)
            for (double g : sweep.gammas) {
                probe.alpha = a;
                probe.beta = b;
                probe.gamma = g;
                try {
                    probe.validate();
                } catch (const ValidationError &e) {
                    throw ConfigError(std::string("sweep point out of range: ") + e.what());
                }
            }
    if (out_dir.empty())
        throw ConfigError("out_dir must not be empty");
}

ExperimentConfig parse_config(const std::string &json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error &e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }

    ExperimentConfig cfg;
    try {
        if (j.contains("grid")) parse_grid(j.at("grid"), cfg.grid);
        if (j.contains("router")) parse_router(j.at("router"), cfg.router);
        if (j.contains("topology")) {
            const json &t = j.at("topology");
            if (t.contains("kind") && !t.at("kind").is_null())
                cfg.topo_kind = parse_topology_kind(t.at("kind").get<std::string>());
            if (t.contains("link_budget") && !t.at("link_budget").is_null())
                cfg.smallworld.link_budget = t.at("link_budget").get<int>();
            get_if_present(t, "decay_exponent", cfg.smallworld.decay_exponent);
        }
        if (j.contains("traffic")) {
            const json &t = j.at("traffic");
            if (t.contains("kind") && !t.at("kind").is_null())
                cfg.traffic.kind = parse_traffic_kind(t.at("kind").get<std::string>());
            get_if_present(t, "hotspot_fraction", cfg.traffic.hotspot_fraction);
            get_if_present(t, "hotspot_count", cfg.traffic.hotspot_count);
            get_if_present(t, "theta", cfg.traffic.decay_theta);
            if (t.contains("csv_path") && !t.at("csv_path").is_null())
                cfg.traffic_csv = t.at("csv_path").get<std::string>();
        }
        if (j.contains("process")) parse_process(j.at("process"), cfg.process);
        if (j.contains("sweep")) {
            const json &s = j.at("sweep");
            get_if_present(s, "alphas", cfg.sweep.alphas);
            get_if_present(s, "betas", cfg.sweep.betas);
            get_if_present(s, "gammas", cfg.sweep.gammas);
            get_if_present(s, "n_seeds", cfg.sweep.n_seeds);
        }
        if (j.contains("search")) parse_search(j.at("search"), cfg.search);
        get_if_present(j, "seed", cfg.seed);
        get_if_present(j, "out_dir", cfg.out_dir);
    } catch (const json::exception &e) {
        throw ConfigError(std::string("config field error: ") + e.what());
    } catch (const ValidationError &e) {
        throw ConfigError(e.what());
    }

    cfg.smallworld.max_ports = cfg.router.max_ports;
    apply_seed_override(cfg, cfg.seed);

    cfg.validate();
    return cfg;
}

void apply_seed_override(ExperimentConfig &cfg, std::uint64_t seed) {
    cfg.seed = seed;
    cfg.smallworld.seed = seed;
    cfg.traffic.seed = derive_seed(seed, kTrafficTag);
    cfg.search.seed = seed;
}

ExperimentConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

Design build_initial_design(const ExperimentConfig &cfg, std::uint64_t topo_seed) {
    Design d;
    if (cfg.topo_kind == TopologyKind::Mesh) {
        d.topology = gen_mesh(cfg.grid, cfg.router.max_ports);
        d.kind = TopologyKind::Mesh;
    } else {
        SmallWorldSpec sw = cfg.smallworld;
        sw.seed = topo_seed;
        d.topology = gen_smallworld(cfg.grid, sw);
        d.kind = TopologyKind::SmallWorld;
    }
    apply_po_tiers(d);
    return d;
}

TrafficMatrix build_traffic(const ExperimentConfig &cfg) {
    if (cfg.traffic_csv.has_value())
        return load_traffic_csv(*cfg.traffic_csv, cfg.grid.router_count());
    return gen_traffic(cfg.grid, cfg.traffic);
}

} // namespace m3dnoc
