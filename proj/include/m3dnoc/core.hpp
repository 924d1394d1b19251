// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace m3dnoc {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// A design or input file violates a structural invariant.
class ValidationError : public std::runtime_error {
  public:
    explicit ValidationError(const std::string &what) : std::runtime_error(what) {}
};

/// A requested construction cannot be satisfied (budget, degree caps, size limits).
class InfeasibleError : public std::runtime_error {
  public:
    explicit InfeasibleError(const std::string &what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// Grid and router configuration
// ---------------------------------------------------------------------------

struct Coord {
    int x = 0;
    int y = 0;
    int z = 0;

    friend bool operator==(const Coord &a, const Coord &b) {
        return a.x == b.x && a.y == b.y && a.z == b.z;
    }
};

/// |dx| + |dy| + |dz|. Link lengths and routing distances are all grid-hop based.
int manhattan_distance(const Coord &a, const Coord &b);

struct GridSpec {
    int x = 1;
    int y = 1;
    int z = 1;
    double hop_pitch_mm = 1.0; // physical length of one grid unit

    int router_count() const { return x * y * z; }
    Coord coord_of(int router_id) const;
    int id_of(const Coord &c) const;

    void validate() const; // throws ValidationError
};

struct RouterConfig {
    int vcs = 4;             // virtual channels per port
    int flit_bits = 32;      // flit width
    int flits_per_packet = 6;
    int max_ports = 7;       // per-router bound: network degree <= max_ports - 1

    void validate() const;
};

// ---------------------------------------------------------------------------
// Tiers and stages
// ---------------------------------------------------------------------------

enum class StageTier : std::uint8_t {
    BT, // bottom-tier-only logic
    TT, // top-tier-only logic
    MT, // logic split across both tiers
};

enum class LinkTier : std::uint8_t {
    Top,    // copper
    Bottom, // tungsten
};

enum class StageKind : std::uint8_t {
    VCA = 0, // virtual channel allocator
    SWA = 1, // switch allocator
    XBAR = 2, // crossbar traversal
};

inline constexpr int kStageCount = 3;
inline constexpr std::array<StageKind, kStageCount> kAllStages = {StageKind::VCA, StageKind::SWA,
                                                                  StageKind::XBAR};

const char *to_string(StageTier t);
const char *to_string(LinkTier t);
const char *to_string(StageKind k);
StageTier parse_stage_tier(const std::string &s);
LinkTier parse_link_tier(const std::string &s);

// ---------------------------------------------------------------------------
// Topology
// ---------------------------------------------------------------------------

struct Link {
    int a = 0; // router index, a < b
    int b = 0;
    int manhattan_len = 0;
    double length_mm = 0.0;
};

enum class TopologyKind : std::uint8_t { Mesh, SmallWorld };

const char *to_string(TopologyKind k);
TopologyKind parse_topology_kind(const std::string &s);

/// Router coordinates, undirected links and the core->router placement.
/// Value object: perturbations build modified copies and call rebuild_adjacency().
struct Topology {
    GridSpec grid;
    std::vector<Coord> routers;
    std::vector<Link> links;
    std::vector<int> core_placement; // core -> router (bijection)
    int max_ports = 7;

    int router_count() const { return static_cast<int>(routers.size()); }
    int link_count() const { return static_cast<int>(links.size()); }

    /// Sorted (neighbor, link_id) lists, derived from `links`.
    const std::vector<std::vector<std::pair<int, int>>> &adjacency() const { return nbrs_; }
    int degree(int router) const { return static_cast<int>(nbrs_[router].size()); }
    /// Ports of a router: network degree plus the local injection/ejection port.
    int ports(int router) const { return degree(router) + 1; }

    void rebuild_adjacency();

  private:
    std::vector<std::vector<std::pair<int, int>>> nbrs_;
};

// ---------------------------------------------------------------------------
// Tier assignment and design
// ---------------------------------------------------------------------------

struct TierAssignment {
    std::vector<std::array<StageTier, kStageCount>> stage_tier; // [router][stage]
    std::vector<LinkTier> link_tier;                            // [link]

    StageTier stage(int router, StageKind k) const {
        return stage_tier[router][static_cast<int>(k)];
    }
};

/// Full search state: topology + placement + stage tiers + link tiers.
struct Design {
    Topology topology;
    TierAssignment tiers;
    TopologyKind kind = TopologyKind::Mesh;
};

// ---------------------------------------------------------------------------
// Traffic
// ---------------------------------------------------------------------------

/// Pairwise interaction frequencies between cores, arbitrary rate units.
class TrafficMatrix {
  public:
    TrafficMatrix() = default;
    explicit TrafficMatrix(int n) : n_(n), f_(static_cast<std::size_t>(n) * n, 0.0) {}

    int size() const { return n_; }
    double at(int i, int j) const { return f_[static_cast<std::size_t>(i) * n_ + j]; }
    void set(int i, int j, double v) { f_[static_cast<std::size_t>(i) * n_ + j] = v; }
    void scale(double c);
    double total() const;

    void validate() const; // f[i][i] == 0, entries >= 0, at least one positive

  private:
    int n_ = 0;
    std::vector<double> f_;
};

// ---------------------------------------------------------------------------
// Process parameters
// ---------------------------------------------------------------------------

/// Inter-tier process variation knobs plus the calibration constants of the
/// delay/energy models. All constants are overridable through the config file.
struct ProcessParams {
    double alpha = 0.0; // top-tier on-current degradation fraction
    double beta = 0.0;  // bottom-tier tungsten link delay penalty fraction
    double gamma = 0.0; // multitier FO4 improvement fraction
    int tiers = 2;      // circuit tiers T

    double fo4_slope = 1.8; // FO4-ratio slope per unit alpha (alpha=0.05 -> 1.09)
    double cap_slope = 1.0; // logic-capacitance slope per unit alpha

    // Fraction of 2D stage capacitance that is interconnect, per stage.
    // The crossbar is wire-dominated; the allocators are logic-dominated.
    std::array<double, kStageCount> wire_frac = {0.3, 0.3, 0.7}; // [VCA, SWA, XBAR]

    double t_cu_ps_per_mm = 200.0; // copper link unit delay, repeated global wire
    double e_cu_pj_per_mm = 2.0;   // copper link unit energy
    double fo4_ps = 15.0;          // picoseconds per FO4 unit
    double e0_pj = 1.0;            // baseline stage energy scale

    std::optional<double> beta_e; // tungsten energy penalty; defaults to beta

    double beta_energy() const { return beta_e.has_value() ? *beta_e : beta; }
    double wire_fraction(StageKind k) const { return wire_frac[static_cast<int>(k)]; }

    /// Copy with alpha = beta = 0, as assumed by process-oblivious optimization.
    ProcessParams ideal() const;

    void validate() const;
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

struct Violation {
    std::string code;    // "connectivity", "tier-compatibility", "degree", ...
    std::string message; // names the offending router/link
};

struct ValidationReport {
    bool ok = true;
    std::vector<Violation> violations;

    std::string summary() const;
};

/// Structural validation: connectivity, degree bound, Manhattan-length
/// consistency, placement bijection, and the link/stage tier-compatibility
/// constraint (a top-tier link needs TT or MT SWA and VCA at both endpoints,
/// a bottom-tier link needs BT or MT; the crossbar has no link attachment).
ValidationReport validate_design(const Design &d);

/// Mean over routers of 2*triangles/(deg*(deg-1)); routers with degree < 2
/// contribute 0. Requires at least 3 routers.
double clustering_coefficient(const Topology &t);

} // namespace m3dnoc
