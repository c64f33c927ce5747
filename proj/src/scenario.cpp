#include "lfc/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "lfc/errors.hpp"

namespace lfc {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& msg) {
    throw ValidationError("config: " + msg);
}

const Json& member(const Json& j, const char* field) {
    const auto it = j.find(field);
    if (it == j.end()) fail(std::string("missing field '") + field + "'");
    return *it;
}

double number(const Json& j, const char* field) {
    const Json& v = member(j, field);
    if (!v.is_number()) fail(std::string("field '") + field + "' must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(std::string("field '") + field + "' must be finite");
    return x;
}

int integer(const Json& j, const char* field) {
    const Json& v = member(j, field);
    if (!v.is_number_integer()) fail(std::string("field '") + field + "' must be an integer");
    return v.get<int>();
}

Json matrix_to_json(const Matrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const Json& j, const char* field) {
    if (!j.is_array() || j.empty())
        fail(std::string("field '") + field + "' must be a non-empty array of rows");
    const std::size_t rows = j.size();
    if (!j.front().is_array() || j.front().empty())
        fail(std::string("field '") + field + "' rows must be non-empty arrays");
    const std::size_t cols = j.front().size();
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        const Json& row = j[i];
        if (!row.is_array() || row.size() != cols)
            fail(std::string("field '") + field + "' rows must have equal length");
        for (std::size_t c = 0; c < cols; ++c) {
            if (!row[c].is_number())
                fail(std::string("field '") + field + "' entries must be numbers");
            m(i, c) = row[c].get<double>();
        }
    }
    return m;
}

Json delay_to_json(const DelayFunction& d) {
    Json j = Json::object();
    if (d.kind == DelayFunction::Kind::constant) {
        j["type"] = "constant";
        j["value"] = d.value;
    } else {
        j["type"] = "abs_cos";
        j["amplitude"] = d.value;
    }
    return j;
}

DelayFunction delay_from_json(const Json& j) {
    const Json& type = member(j, "type");
    if (!type.is_string()) fail("field 'delay.type' must be a string");
    const std::string kind = type.get<std::string>();
    DelayFunction d;
    if (kind == "constant") {
        d = DelayFunction::constant(number(j, "value"));
    } else if (kind == "abs_cos") {
        d = DelayFunction::abs_cos(number(j, "amplitude"));
    } else {
        fail("field 'delay.type' must be 'constant' or 'abs_cos', got '" + kind + "'");
    }
    if (d.value < 0.0) fail("delay value must be non-negative");
    return d;
}

GraphDef graph_from_json(const Json& j, int agents) {
    GraphDef def;
    const Json& name = member(j, "name");
    if (!name.is_string() || name.get<std::string>().empty())
        fail("field 'graphs[].name' must be a non-empty string");
    def.name = name.get<std::string>();
    const std::string where = "graph '" + def.name + "'";

    const Json& arcs = member(j, "arcs");
    if (!arcs.is_array()) fail(where + ": field 'arcs' must be an array");
    for (const Json& a : arcs) {
        if (!a.is_array() || a.size() != 3 || !a[0].is_number_integer() ||
            !a[1].is_number_integer() || !a[2].is_number())
            fail(where + ": arcs must be [from, to, weight] triples");
        const int from = a[0].get<int>();
        const int to = a[1].get<int>();
        const double w = a[2].get<double>();
        if (from < 1 || from > agents || to < 1 || to > agents)
            fail(where + ": arc endpoints must lie in 1.." + std::to_string(agents));
        if (from == to) fail(where + ": self-loop on agent " + std::to_string(from));
        if (!(w > 0.0) || !std::isfinite(w))
            fail(where + ": arc weights must be positive and finite");
        for (const Arc& seen : def.arcs)
            if (seen.from == from && seen.to == to)
                fail(where + ": duplicate arc " + std::to_string(from) + " -> " +
                     std::to_string(to));
        def.arcs.push_back({from, to, w});
    }

    def.leader_weights.assign(static_cast<std::size_t>(agents), 0.0);
    const Json& leader = member(j, "leader_arcs");
    if (!leader.is_array()) fail(where + ": field 'leader_arcs' must be an array");
    for (const Json& a : leader) {
        if (!a.is_array() || a.size() != 2 || !a[0].is_number_integer() || !a[1].is_number())
            fail(where + ": leader_arcs must be [agent, weight] pairs");
        const int agent = a[0].get<int>();
        const double w = a[1].get<double>();
        if (agent < 1 || agent > agents)
            fail(where + ": leader arc agent must lie in 1.." + std::to_string(agents));
        if (!(w > 0.0) || !std::isfinite(w))
            fail(where + ": leader arc weights must be positive and finite");
        if (def.leader_weights[static_cast<std::size_t>(agent - 1)] != 0.0)
            fail(where + ": duplicate leader arc for agent " + std::to_string(agent));
        def.leader_weights[static_cast<std::size_t>(agent - 1)] = w;
    }
    return def;
}

Json graph_to_json(const GraphDef& g) {
    Json j = Json::object();
    j["name"] = g.name;
    Json arcs = Json::array();
    for (const Arc& a : g.arcs) arcs.push_back(Json::array({a.from, a.to, a.weight}));
    j["arcs"] = std::move(arcs);
    Json leader = Json::array();
    for (std::size_t i = 0; i < g.leader_weights.size(); ++i)
        if (g.leader_weights[i] != 0.0)
            leader.push_back(Json::array({static_cast<int>(i) + 1, g.leader_weights[i]}));
    j["leader_arcs"] = std::move(leader);
    return j;
}

Vector vector_from_json(const Json& j, const char* field, std::size_t want) {
    if (!j.is_array() || j.size() != want)
        fail(std::string("field '") + field + "' must be an array of " + std::to_string(want) +
             " numbers");
    Vector v(want);
    for (std::size_t i = 0; i < want; ++i) {
        if (!j[i].is_number() || !std::isfinite(j[i].get<double>()))
            fail(std::string("field '") + field + "' entries must be finite numbers");
        v[i] = j[i].get<double>();
    }
    return v;
}

std::vector<std::string> deduped_order(const ScenarioConfig& cfg) {
    std::vector<std::string> names;
    for (const auto& nm : cfg.switching_order)
        if (std::find(names.begin(), names.end(), nm) == names.end()) names.push_back(nm);
    return names;
}

GraphDef builtin_g1() {
    return {"G1",
            {{1, 2, 1.0}, {2, 1, 1.0}, {4, 2, 1.0}, {4, 3, 1.0}},
            {1.0, 0.0, 1.0, 0.0}};
}

GraphDef builtin_g2() {
    return {"G2",
            {{1, 2, 1.0}, {2, 1, 1.0}, {3, 4, 1.0}, {4, 3, 1.0}},
            {1.0, 0.0, 1.0, 0.0}};
}

void format_number(std::ostream& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
}

} // namespace

ScenarioConfig scenario_from_json(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("config parse error: ") + e.what());
    }
    if (!j.is_object()) fail("top level must be an object");

    ScenarioConfig cfg;
    cfg.agents = integer(j, "agents");
    if (cfg.agents < 1) fail("field 'agents' must be at least 1");

    const Json& graphs = member(j, "graphs");
    if (!graphs.is_array() || graphs.empty())
        fail("field 'graphs' must be a non-empty array");
    for (const Json& g : graphs) {
        GraphDef def = graph_from_json(g, cfg.agents);
        for (const auto& seen : cfg.graphs)
            if (seen.name == def.name) fail("duplicate graph name '" + def.name + "'");
        cfg.graphs.push_back(std::move(def));
    }

    const Json& sw = member(j, "switching");
    if (!sw.is_object()) fail("field 'switching' must be an object");
    const Json& order = member(sw, "order");
    if (!order.is_array() || order.empty())
        fail("field 'switching.order' must be a non-empty array of graph names");
    for (const Json& nm : order) {
        if (!nm.is_string()) fail("field 'switching.order' entries must be strings");
        const std::string name = nm.get<std::string>();
        if (std::none_of(cfg.graphs.begin(), cfg.graphs.end(),
                         [&](const GraphDef& g) { return g.name == name; }))
            fail("switching order references undefined graph '" + name + "'");
        cfg.switching_order.push_back(name);
    }
    cfg.dwell = number(sw, "dwell");
    if (!(cfg.dwell > 0.0)) fail("field 'switching.dwell' must be positive");

    cfg.gain_k = number(j, "gain_k");
    cfg.q = number(j, "q");
    cfg.delay = delay_from_json(member(j, "delay"));

    const Json& sim = member(j, "sim");
    if (!sim.is_object()) fail("field 'sim' must be an object");
    cfg.t_end = number(sim, "t_end");
    cfg.dt = number(sim, "dt");
    cfg.v0 = number(sim, "v0");
    cfg.x0_init = number(sim, "x0_init");
    if (!(cfg.t_end > 0.0)) fail("field 'sim.t_end' must be positive");
    if (!(cfg.dt > 0.0)) fail("field 'sim.dt' must be positive");

    const bool has_seed = sim.contains("init_seed");
    const bool has_x = sim.contains("x_init");
    const bool has_v = sim.contains("v_init");
    if (has_x != has_v) fail("fields 'sim.x_init' and 'sim.v_init' must come together");
    if (has_seed && has_x) fail("provide 'sim.init_seed' or explicit states, not both");
    if (!has_seed && !has_x) fail("provide 'sim.init_seed' or explicit 'sim.x_init'/'sim.v_init'");
    if (has_seed) {
        const Json& seed = sim["init_seed"];
        if (!seed.is_number_unsigned())
            fail("field 'sim.init_seed' must be a non-negative integer");
        cfg.init_seed = seed.get<unsigned>();
    } else {
        cfg.x_init = vector_from_json(sim["x_init"], "sim.x_init",
                                      static_cast<std::size_t>(cfg.agents));
        cfg.v_init = vector_from_json(sim["v_init"], "sim.v_init",
                                      static_cast<std::size_t>(cfg.agents));
    }
    return cfg;
}

std::string scenario_to_json(const ScenarioConfig& cfg) {
    Json j = Json::object();
    j["agents"] = cfg.agents;
    Json graphs = Json::array();
    for (const auto& g : cfg.graphs) graphs.push_back(graph_to_json(g));
    j["graphs"] = std::move(graphs);
    j["switching"] = Json::object({{"order", cfg.switching_order}, {"dwell", cfg.dwell}});
    j["gain_k"] = cfg.gain_k;
    j["q"] = cfg.q;
    j["delay"] = delay_to_json(cfg.delay);
    Json sim = Json::object();
    sim["t_end"] = cfg.t_end;
    sim["dt"] = cfg.dt;
    sim["v0"] = cfg.v0;
    sim["x0_init"] = cfg.x0_init;
    if (cfg.init_seed) sim["init_seed"] = *cfg.init_seed;
    if (cfg.x_init) sim["x_init"] = *cfg.x_init;
    if (cfg.v_init) sim["v_init"] = *cfg.v_init;
    j["sim"] = std::move(sim);
    return j.dump(2) + "\n";
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return scenario_from_json(buf.str());
}

std::vector<std::string> builtin_scenario_names() {
    return {"fig1", "fig2", "switched"};
}

ScenarioConfig builtin_scenario(const std::string& name) {
    ScenarioConfig cfg;
    cfg.agents = 4;
    cfg.dwell = 1.0;
    cfg.q = 1.05;
    cfg.t_end = 50.0;
    cfg.dt = 1e-3;
    cfg.v0 = 1.0;
    cfg.x0_init = 0.0;
    cfg.init_seed = 42u;
    if (name == "fig1") {
        cfg.graphs = {builtin_g1()};
        cfg.switching_order = {"G1"};
        cfg.gain_k = 3.0;
        cfg.delay = DelayFunction::abs_cos(0.03);
    } else if (name == "fig2") {
        cfg.graphs = {builtin_g2()};
        cfg.switching_order = {"G2"};
        cfg.gain_k = 3.0;
        cfg.delay = DelayFunction::abs_cos(0.03);
    } else if (name == "switched") {
        cfg.graphs = {builtin_g1(), builtin_g2()};
        cfg.switching_order = {"G1", "G2"};
        cfg.gain_k = 9.0;
        cfg.delay = DelayFunction::abs_cos(0.015);
    } else {
        std::string names;
        for (const auto& nm : builtin_scenario_names())
            names += (names.empty() ? "" : ", ") + nm;
        throw ValidationError("unknown scenario '" + name + "'; available: " + names);
    }
    return cfg;
}

std::vector<LeaderTopology> build_topologies(const ScenarioConfig& cfg) {
    std::vector<LeaderTopology> out;
    for (const auto& nm : deduped_order(cfg)) {
        const auto it = std::find_if(cfg.graphs.begin(), cfg.graphs.end(),
                                     [&](const GraphDef& g) { return g.name == nm; });
        if (it == cfg.graphs.end())
            fail("switching order references undefined graph '" + nm + "'");
        out.emplace_back(WeightedDigraph(cfg.agents, it->arcs), it->leader_weights);
    }
    return out;
}

SimConfig build_sim_config(const ScenarioConfig& cfg, std::optional<unsigned> seed_override) {
    SimConfig sim;
    sim.topologies = build_topologies(cfg);
    const auto names = deduped_order(cfg);
    for (const auto& nm : cfg.switching_order)
        sim.schedule.order.push_back(static_cast<std::size_t>(
            std::find(names.begin(), names.end(), nm) - names.begin()));
    sim.schedule.dwell = cfg.dwell;
    sim.k = cfg.gain_k;
    sim.delay = cfg.delay;
    sim.v0 = cfg.v0;
    sim.x0_init = cfg.x0_init;
    sim.t_end = cfg.t_end;
    sim.dt = cfg.dt;

    const auto n = static_cast<std::size_t>(cfg.agents);
    if (!seed_override && cfg.x_init && cfg.v_init) {
        if (cfg.x_init->size() != n || cfg.v_init->size() != n)
            fail("explicit initial states must have one entry per agent");
        sim.x_init = *cfg.x_init;
        sim.v_init = *cfg.v_init;
    } else {
        const std::optional<unsigned> seed = seed_override ? seed_override : cfg.init_seed;
        if (!seed) fail("sim needs 'init_seed' or explicit 'x_init'/'v_init'");
        std::mt19937 gen(*seed);
        std::uniform_real_distribution<double> dx(-2.0, 2.0);
        std::uniform_real_distribution<double> dv(-1.0, 1.0);
        sim.x_init.resize(n);
        sim.v_init.resize(n);
        for (auto& x : sim.x_init) x = cfg.x0_init + dx(gen);
        for (auto& v : sim.v_init) v = cfg.v0 + dv(gen);
    }
    validate(sim);
    return sim;
}

std::string report_to_json(const FixedAnalysis& a) {
    Json j = Json::object();
    j["mode"] = "fixed";
    j["h"] = matrix_to_json(a.h);
    j["p_bar"] = matrix_to_json(a.p_bar);
    j["mu_bar"] = a.mu_bar;
    j["lambda_bar"] = a.lambda_bar;
    j["k_star"] = a.k_star;
    j["k_star_alt"] = a.k_star_alt;
    j["k"] = a.k;
    j["q"] = a.q;
    j["q_matrix"] = matrix_to_json(a.q_matrix);
    j["lambda_min"] = a.lambda_min;
    j["tau"] = a.tau;
    j["norm_convention"] = a.norm_convention;
    j["warnings"] = a.warnings;
    return j.dump(2) + "\n";
}

std::string report_to_json(const SwitchedAnalysis& a) {
    Json j = Json::object();
    j["mode"] = "switched";
    Json hs = Json::array();
    for (const Matrix& h : a.h_list) hs.push_back(matrix_to_json(h));
    j["h_list"] = std::move(hs);
    j["lambda_tilde"] = a.lambda_tilde;
    j["mu_tilde"] = a.mu_tilde;
    j["k_star"] = a.k_star;
    j["k_star_alt"] = a.k_star_alt;
    j["k"] = a.k;
    j["q"] = a.q;
    j["lambda_min"] = a.lambda_min;
    j["tau"] = a.tau;
    j["unbalanced_members"] = a.unbalanced_members;
    j["norm_convention"] = a.norm_convention;
    j["warnings"] = a.warnings;
    return j.dump(2) + "\n";
}

namespace {

Json parse_report(const std::string& text, const char* mode) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("report parse error: ") + e.what());
    }
    if (!j.is_object()) fail("report must be an object");
    const Json& m = member(j, "mode");
    if (!m.is_string() || m.get<std::string>() != mode)
        fail(std::string("report mode must be '") + mode + "'");
    return j;
}

std::vector<std::string> strings_from_json(const Json& j, const char* field) {
    if (!j.is_array()) fail(std::string("field '") + field + "' must be an array");
    std::vector<std::string> out;
    for (const Json& s : j) {
        if (!s.is_string()) fail(std::string("field '") + field + "' entries must be strings");
        out.push_back(s.get<std::string>());
    }
    return out;
}

} // namespace

FixedAnalysis fixed_report_from_json(const std::string& text) {
    const Json j = parse_report(text, "fixed");
    FixedAnalysis a;
    a.h = matrix_from_json(member(j, "h"), "h");
    a.p_bar = matrix_from_json(member(j, "p_bar"), "p_bar");
    a.mu_bar = number(j, "mu_bar");
    a.lambda_bar = number(j, "lambda_bar");
    a.k_star = number(j, "k_star");
    a.k_star_alt = number(j, "k_star_alt");
    a.k = number(j, "k");
    a.q = number(j, "q");
    a.q_matrix = matrix_from_json(member(j, "q_matrix"), "q_matrix");
    a.lambda_min = number(j, "lambda_min");
    a.tau = number(j, "tau");
    const Json& nc = member(j, "norm_convention");
    if (!nc.is_string()) fail("field 'norm_convention' must be a string");
    a.norm_convention = nc.get<std::string>();
    a.warnings = strings_from_json(member(j, "warnings"), "warnings");
    return a;
}

SwitchedAnalysis switched_report_from_json(const std::string& text) {
    const Json j = parse_report(text, "switched");
    SwitchedAnalysis a;
    const Json& hs = member(j, "h_list");
    if (!hs.is_array() || hs.empty()) fail("field 'h_list' must be a non-empty array");
    for (const Json& h : hs) a.h_list.push_back(matrix_from_json(h, "h_list"));
    a.lambda_tilde = number(j, "lambda_tilde");
    a.mu_tilde = number(j, "mu_tilde");
    a.k_star = number(j, "k_star");
    a.k_star_alt = number(j, "k_star_alt");
    a.k = number(j, "k");
    a.q = number(j, "q");
    a.lambda_min = number(j, "lambda_min");
    a.tau = number(j, "tau");
    const Json& um = member(j, "unbalanced_members");
    if (!um.is_array()) fail("field 'unbalanced_members' must be an array");
    for (const Json& idx : um) {
        if (!idx.is_number_unsigned()) fail("field 'unbalanced_members' entries must be indices");
        a.unbalanced_members.push_back(idx.get<std::size_t>());
    }
    const Json& nc = member(j, "norm_convention");
    if (!nc.is_string()) fail("field 'norm_convention' must be a string");
    a.norm_convention = nc.get<std::string>();
    a.warnings = strings_from_json(member(j, "warnings"), "warnings");
    return a;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& tr) {
    const std::size_t n = tr.agents();
    out << "t,sigma,x0";
    for (std::size_t i = 1; i <= n; ++i) out << ",x_" << i;
    for (std::size_t i = 1; i <= n; ++i) out << ",v_" << i;
    for (std::size_t i = 1; i <= n; ++i) out << ",errx_" << i;
    for (std::size_t i = 1; i <= n; ++i) out << ",errv_" << i;
    out << "\n";
    for (std::size_t row = 0; row < tr.samples(); ++row) {
        format_number(out, tr.times[row]);
        out << "," << tr.sigma[row] << ",";
        format_number(out, tr.leader_x[row]);
        for (const auto* cols : {&tr.agent_x, &tr.agent_v, &tr.err_x, &tr.err_v})
            for (std::size_t i = 0; i < n; ++i) {
                out << ",";
                format_number(out, (*cols)[row][i]);
            }
        out << "\n";
    }
    if (tr.diverged) {
        out << "# diverged: state left the finite range after t = ";
        format_number(out, tr.times.back());
        out << "\n";
    }
}

} // namespace lfc
