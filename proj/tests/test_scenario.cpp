#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "doctest.h"
#include "fixtures.hpp"
#include "lfc/errors.hpp"
#include "lfc/scenario.hpp"
#include "lfc/stability.hpp"

using lfc::ScenarioConfig;
using Json = nlohmann::ordered_json;

namespace {

Json base_json() {
    return Json::parse(R"({
      "agents": 3,
      "graphs": [
        {"name": "ring", "arcs": [[1, 2, 1.0], [2, 3, 1.0], [3, 1, 1.0]],
         "leader_arcs": [[1, 0.5]]}
      ],
      "switching": {"order": ["ring"], "dwell": 1.0},
      "gain_k": 3.0,
      "q": 1.05,
      "delay": {"type": "constant", "value": 0.02},
      "sim": {"t_end": 1.0, "dt": 0.001, "v0": 1.0, "x0_init": 0.0, "init_seed": 7}
    })");
}

void expect_rejected(const Json& j, const std::string& needle) {
    try {
        lfc::scenario_from_json(j.dump());
        FAIL("expected rejection mentioning '" << needle << "'");
    } catch (const lfc::ValidationError& e) {
        CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

} // namespace

TEST_CASE("builtin scenarios expose the demonstration setups") {
    CHECK(lfc::builtin_scenario_names() ==
          std::vector<std::string>{"fig1", "fig2", "switched"});

    const ScenarioConfig fig1 = lfc::builtin_scenario("fig1");
    CHECK(fig1.agents == 4);
    REQUIRE(fig1.graphs.size() == 1);
    CHECK(fig1.graphs[0].name == "G1");
    CHECK(fig1.graphs[0].arcs ==
          std::vector<lfc::Arc>{{1, 2, 1.0}, {2, 1, 1.0}, {4, 2, 1.0}, {4, 3, 1.0}});
    CHECK(fig1.graphs[0].leader_weights == lfc::Vector{1.0, 0.0, 1.0, 0.0});
    CHECK(fig1.switching_order == std::vector<std::string>{"G1"});
    CHECK(fig1.gain_k == 3.0);
    CHECK(fig1.q == 1.05);
    CHECK(fig1.delay == lfc::DelayFunction::abs_cos(0.03));
    CHECK(fig1.t_end == 50.0);
    CHECK(fig1.dt == 1e-3);
    CHECK(fig1.v0 == 1.0);
    CHECK(fig1.x0_init == 0.0);
    CHECK(fig1.init_seed == 42u);
    CHECK_FALSE(fig1.x_init.has_value());

    const ScenarioConfig sw = lfc::builtin_scenario("switched");
    REQUIRE(sw.graphs.size() == 2);
    CHECK(sw.graphs[1].name == "G2");
    CHECK(sw.switching_order == std::vector<std::string>{"G1", "G2"});
    CHECK(sw.gain_k == 9.0);
    CHECK(sw.delay == lfc::DelayFunction::abs_cos(0.015));

    CHECK_THROWS_AS(lfc::builtin_scenario("fig3"), lfc::ValidationError);
    try {
        lfc::builtin_scenario("fig3");
    } catch (const lfc::ValidationError& e) {
        CHECK(std::string(e.what()).find("available") != std::string::npos);
    }
}

TEST_CASE("scenario JSON round-trips losslessly") {
    for (const auto& name : lfc::builtin_scenario_names()) {
        CAPTURE(name);
        const ScenarioConfig cfg = lfc::builtin_scenario(name);
        CHECK(lfc::scenario_from_json(lfc::scenario_to_json(cfg)) == cfg);
    }

    // Explicit initial states with awkward doubles survive the trip exactly.
    ScenarioConfig cfg = lfc::builtin_scenario("fig1");
    cfg.init_seed.reset();
    cfg.x_init = lfc::Vector{0.1 + 0.2, 1.0 / 3.0, -2.5e-7, 4.0};
    cfg.v_init = lfc::Vector{1.0, 0.9999999999999999, -0.125, 3.141592653589793};
    cfg.dwell = 0.32;
    cfg.delay = lfc::DelayFunction::constant(0.0213);
    CHECK(lfc::scenario_from_json(lfc::scenario_to_json(cfg)) == cfg);
}

TEST_CASE("scenario parsing names the offending field") {
    CHECK_NOTHROW(lfc::scenario_from_json(base_json().dump()));
    CHECK_THROWS_AS(lfc::scenario_from_json("{"), lfc::ValidationError);
    CHECK_THROWS_AS(lfc::scenario_from_json("[]"), lfc::ValidationError);

    Json j = base_json();
    j.erase("agents");
    expect_rejected(j, "agents");

    j = base_json();
    j["agents"] = 0;
    expect_rejected(j, "agents");

    j = base_json();
    j["graphs"] = Json::array();
    expect_rejected(j, "graphs");

    j = base_json();
    j["graphs"].push_back(j["graphs"][0]);
    expect_rejected(j, "duplicate graph name");

    j = base_json();
    j["graphs"][0]["arcs"][0] = Json::array({0, 2, 1.0});
    expect_rejected(j, "endpoints");

    j = base_json();
    j["graphs"][0]["arcs"][0] = Json::array({2, 2, 1.0});
    expect_rejected(j, "self-loop");

    j = base_json();
    j["graphs"][0]["arcs"].push_back(Json::array({1, 2, 0.5}));
    expect_rejected(j, "duplicate arc");

    j = base_json();
    j["graphs"][0]["arcs"][0][2] = 0.0;
    expect_rejected(j, "positive");

    j = base_json();
    j["graphs"][0]["leader_arcs"][0][0] = 9;
    expect_rejected(j, "leader arc");

    j = base_json();
    j["graphs"][0]["leader_arcs"].push_back(Json::array({1, 2.0}));
    expect_rejected(j, "duplicate leader arc");

    j = base_json();
    j["switching"]["order"] = Json::array();
    expect_rejected(j, "switching.order");

    j = base_json();
    j["switching"]["order"].push_back("ghost");
    expect_rejected(j, "undefined graph");

    j = base_json();
    j["switching"]["dwell"] = 0.0;
    expect_rejected(j, "dwell");

    j = base_json();
    j["delay"]["type"] = "sawtooth";
    expect_rejected(j, "delay.type");

    j = base_json();
    j["delay"] = Json::object({{"type", "abs_cos"}, {"amplitude", -0.1}});
    expect_rejected(j, "non-negative");

    j = base_json();
    j["sim"]["t_end"] = 0.0;
    expect_rejected(j, "t_end");

    j = base_json();
    j["sim"]["dt"] = -1.0;
    expect_rejected(j, "dt");

    j = base_json();
    j["sim"]["x_init"] = Json::array({0.0, 0.0, 0.0});
    j["sim"]["v_init"] = Json::array({0.0, 0.0, 0.0});
    expect_rejected(j, "not both");

    j = base_json();
    j["sim"].erase("init_seed");
    expect_rejected(j, "init_seed");

    j = base_json();
    j["sim"].erase("init_seed");
    j["sim"]["x_init"] = Json::array({0.0, 0.0, 0.0});
    expect_rejected(j, "v_init");

    j = base_json();
    j["sim"].erase("init_seed");
    j["sim"]["x_init"] = Json::array({0.0, 0.0});
    j["sim"]["v_init"] = Json::array({0.0, 0.0, 0.0});
    expect_rejected(j, "x_init");
}

TEST_CASE("build_topologies maps graph names to coupling matrices") {
    const auto fixed = lfc::build_topologies(lfc::builtin_scenario("fig1"));
    REQUIRE(fixed.size() == 1);
    CHECK(lfc::h_matrix(fixed[0]) == lfc::h_matrix(topo_a()));

    const auto pair = lfc::build_topologies(lfc::builtin_scenario("switched"));
    REQUIRE(pair.size() == 2);
    CHECK(lfc::h_matrix(pair[1]) == lfc::h_matrix(topo_b()));

    // Repeats in the order do not duplicate topologies; the schedule indexes
    // into the deduplicated list.
    ScenarioConfig cfg = lfc::builtin_scenario("switched");
    cfg.switching_order = {"G1", "G2", "G1"};
    CHECK(lfc::build_topologies(cfg).size() == 2);
    const auto sim = lfc::build_sim_config(cfg);
    CHECK(sim.schedule.order == std::vector<std::size_t>{0, 1, 0});

    cfg.switching_order = {"G3"};
    CHECK_THROWS_AS(lfc::build_topologies(cfg), lfc::ValidationError);
}

TEST_CASE("seeded initial states are deterministic and inside the spread") {
    const ScenarioConfig cfg = lfc::builtin_scenario("fig1");
    const auto a = lfc::build_sim_config(cfg);
    const auto b = lfc::build_sim_config(cfg);
    CHECK(a.x_init == b.x_init);
    CHECK(a.v_init == b.v_init);
    REQUIRE(a.x_init.size() == 4);
    for (double x : a.x_init) {
        CHECK(x >= cfg.x0_init - 2.0);
        CHECK(x <= cfg.x0_init + 2.0);
    }
    for (double v : a.v_init) {
        CHECK(v >= cfg.v0 - 1.0);
        CHECK(v <= cfg.v0 + 1.0);
    }

    const auto other = lfc::build_sim_config(cfg, 43u);
    CHECK(other.x_init != a.x_init);
}

TEST_CASE("explicit initial states are used verbatim unless overridden") {
    ScenarioConfig cfg = lfc::builtin_scenario("fig1");
    cfg.init_seed.reset();
    cfg.x_init = lfc::Vector{0.25, -0.5, 1.0, 0.125};
    cfg.v_init = lfc::Vector{1.0, 1.5, 0.5, 1.0};
    const auto sim = lfc::build_sim_config(cfg);
    CHECK(sim.x_init == *cfg.x_init);
    CHECK(sim.v_init == *cfg.v_init);

    // A seed override forces the seeded path even with explicit states.
    const auto reseeded = lfc::build_sim_config(cfg, 42u);
    CHECK(reseeded.x_init != *cfg.x_init);
    CHECK(reseeded.x_init == lfc::build_sim_config(lfc::builtin_scenario("fig1")).x_init);
}

TEST_CASE("analysis reports round-trip through JSON exactly") {
    const auto fixed = lfc::analyze_fixed(topo_a(), 3.0, 1.05);
    const auto fr = lfc::fixed_report_from_json(lfc::report_to_json(fixed));
    CHECK(fr.h == fixed.h);
    CHECK(fr.p_bar == fixed.p_bar);
    CHECK(fr.q_matrix == fixed.q_matrix);
    CHECK(fr.mu_bar == fixed.mu_bar);
    CHECK(fr.lambda_bar == fixed.lambda_bar);
    CHECK(fr.k_star == fixed.k_star);
    CHECK(fr.k_star_alt == fixed.k_star_alt);
    CHECK(fr.lambda_min == fixed.lambda_min);
    CHECK(fr.tau == fixed.tau);
    CHECK(fr.norm_convention == fixed.norm_convention);
    CHECK(fr.warnings == fixed.warnings);

    const auto sw = lfc::analyze_switched({topo_a(), topo_b()}, 9.0, 1.05);
    const auto sr = lfc::switched_report_from_json(lfc::report_to_json(sw));
    CHECK(sr.h_list == sw.h_list);
    CHECK(sr.lambda_tilde == sw.lambda_tilde);
    CHECK(sr.mu_tilde == sw.mu_tilde);
    CHECK(sr.lambda_min == sw.lambda_min);
    CHECK(sr.tau == sw.tau);
    CHECK(sr.unbalanced_members == sw.unbalanced_members);
    CHECK(sr.warnings == sw.warnings);

    CHECK_THROWS_AS(lfc::fixed_report_from_json(lfc::report_to_json(sw)),
                    lfc::ValidationError);
    CHECK_THROWS_AS(lfc::switched_report_from_json(lfc::report_to_json(fixed)),
                    lfc::ValidationError);
}

TEST_CASE("trajectory CSV has the documented shape and full precision") {
    ScenarioConfig cfg = lfc::builtin_scenario("fig1");
    cfg.t_end = 0.05;
    const auto tr = lfc::integrate(lfc::build_sim_config(cfg));
    REQUIRE(tr.samples() == 51);

    std::ostringstream out;
    lfc::write_trajectory_csv(out, tr);
    std::istringstream in(out.str());
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line ==
          "t,sigma,x0,x_1,x_2,x_3,x_4,v_1,v_2,v_3,v_4,"
          "errx_1,errx_2,errx_3,errx_4,errv_1,errv_2,errv_3,errv_4");

    std::size_t rows = 0;
    std::string second;
    while (std::getline(in, line)) {
        if (rows == 0) second = line;
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') == 18);
    }
    CHECK(rows == 51);

    // Fields print with enough digits to recover the doubles exactly.
    std::istringstream fields(second);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(fields, cell, ',')) cells.push_back(cell);
    REQUIRE(cells.size() == 19);
    CHECK(std::strtod(cells[0].c_str(), nullptr) == tr.times[0]);
    CHECK(cells[1] == "0");
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(std::strtod(cells[3 + i].c_str(), nullptr) == tr.agent_x[0][i]);
        CHECK(std::strtod(cells[11 + i].c_str(), nullptr) == tr.err_x[0][i]);
    }
}

TEST_CASE("a diverged trajectory appends an explanatory trailer") {
    ScenarioConfig cfg = lfc::builtin_scenario("fig1");
    cfg.gain_k = -5.0;
    cfg.t_end = 20.0;
    const auto tr = lfc::integrate(lfc::build_sim_config(cfg));
    REQUIRE(tr.diverged);

    std::ostringstream out;
    lfc::write_trajectory_csv(out, tr);
    const std::string text = out.str();
    const auto pos = text.rfind("# diverged: state left the finite range after t = ");
    REQUIRE(pos != std::string::npos);
    CHECK(text.back() == '\n');
}

TEST_CASE("scenario files load from disk") {
    const auto path = temp_file("lfc_scenario_roundtrip.json");
    const ScenarioConfig cfg = lfc::builtin_scenario("switched");
    {
        std::ofstream out(path);
        out << lfc::scenario_to_json(cfg);
    }
    CHECK(lfc::load_scenario(path.string()) == cfg);
    std::filesystem::remove(path);

    CHECK_THROWS_AS(lfc::load_scenario((temp_file("lfc_missing_dir") / "nope.json").string()),
                    lfc::ValidationError);
}
