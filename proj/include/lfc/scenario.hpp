#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lfc/ddesim.hpp"
#include "lfc/digraph.hpp"
#include "lfc/stability.hpp"

namespace lfc {

/// One named graph in a scenario file. Arc endpoints use the same 1..n agent
/// numbering as the JSON form; leader_weights[i] belongs to agent i+1.
struct GraphDef {
    std::string name;
    std::vector<Arc> arcs;
    Vector leader_weights;

    bool operator==(const GraphDef&) const = default;
};

struct ScenarioConfig {
    int agents = 0;
    std::vector<GraphDef> graphs;
    std::vector<std::string> switching_order;
    double dwell = 1.0;
    double gain_k = 0.0;
    double q = 0.0;
    DelayFunction delay;
    double t_end = 0.0;
    double dt = 0.0;
    double v0 = 0.0;
    double x0_init = 0.0;
    std::optional<unsigned> init_seed;
    std::optional<Vector> x_init;
    std::optional<Vector> v_init;

    bool operator==(const ScenarioConfig&) const = default;
};

/// Parse/serialize the JSON scenario schema. Parsing validates every field
/// and reports the offending field by name.
ScenarioConfig scenario_from_json(const std::string& text);
std::string scenario_to_json(const ScenarioConfig& cfg);

ScenarioConfig load_scenario(const std::string& path);

/// Built-in scenarios: "fig1" (fixed four-agent chain-and-pair topology,
/// k=3), "fig2" (fixed pairwise topology, k=3), "switched" (alternating
/// both, k=9). Unknown names raise with the list of valid ones.
ScenarioConfig builtin_scenario(const std::string& name);
std::vector<std::string> builtin_scenario_names();

/// Topologies for the graphs named in the switching order, deduplicated in
/// first-appearance order. Fails on names that are not defined.
std::vector<LeaderTopology> build_topologies(const ScenarioConfig& cfg);

/// Expand a scenario into a runnable SimConfig. Follower initial states come
/// from explicit x_init/v_init when given, otherwise from a seeded uniform
/// spread of x in [x0-2, x0+2] and v in [v0-1, v0+1]. seed_override replaces
/// the config's init_seed.
SimConfig build_sim_config(const ScenarioConfig& cfg, std::optional<unsigned> seed_override = {});

/// Stability reports as JSON documents; round-trips are lossless.
std::string report_to_json(const FixedAnalysis& a);
std::string report_to_json(const SwitchedAnalysis& a);
FixedAnalysis fixed_report_from_json(const std::string& text);
SwitchedAnalysis switched_report_from_json(const std::string& text);

/// CSV with header t, sigma, x0, x_1..x_n, v_1..v_n, errx_1..errx_n,
/// errv_1..errv_n, one row per sample, 17 significant digits. A divergence
/// abort appends a trailer comment naming the last valid time.
void write_trajectory_csv(std::ostream& out, const Trajectory& tr);

} // namespace lfc
