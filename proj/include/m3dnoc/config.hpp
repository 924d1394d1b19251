// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "m3dnoc/core.hpp"
#include "m3dnoc/search.hpp"
#include "m3dnoc/topo.hpp"

#include <optional>
#include <string>
#include <vector>

namespace m3dnoc {

class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string &what) : std::runtime_error(what) {}
};

struct SweepSpec {
    std::vector<double> alphas{0.05, 0.10, 0.15, 0.20};
    std::vector<double> betas{0.10, 0.20, 0.30};
    std::vector<double> gammas{0.10, 0.20};
    int n_seeds = 1;
};

/// One JSON document describing grid, router, topology, traffic, process
/// calibration, sweep lists and search settings. Every calibration constant
/// of the process model is overridable here.
struct ExperimentConfig {
    GridSpec grid{4, 4, 1, 1.0};
    RouterConfig router;
    TopologyKind topo_kind = TopologyKind::SmallWorld;
    SmallWorldSpec smallworld;
    TrafficSpec traffic;
    std::optional<std::string> traffic_csv; // overrides the generator when set
    ProcessParams process;
    SweepSpec sweep;
    SearchConfig search;
    std::uint64_t seed = 1;
    std::string out_dir = "out";

    void validate() const; // throws ConfigError
};

ExperimentConfig load_config(const std::string &path);
ExperimentConfig parse_config(const std::string &json_text);

/// Re-derives the generator and search seeds from a new base seed.
void apply_seed_override(ExperimentConfig &cfg, std::uint64_t seed);

/// Materialize the topology/placement half of a StageProblem.
Design build_initial_design(const ExperimentConfig &cfg, std::uint64_t topo_seed);

/// Traffic per config: CSV when given, generator otherwise.
TrafficMatrix build_traffic(const ExperimentConfig &cfg);

} // namespace m3dnoc
