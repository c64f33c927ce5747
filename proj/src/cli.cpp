#include "lfc/cli.hpp"

#include <fstream>
#include <optional>
#include <ostream>
#include <string>

#include <CLI11.hpp>

#include "lfc/ddesim.hpp"
#include "lfc/errors.hpp"
#include "lfc/scenario.hpp"
#include "lfc/stability.hpp"

namespace lfc {

namespace {

enum class Mode { fixed_topology, switched };

Mode resolve_mode(const std::string& mode, std::size_t distinct_graphs) {
    if (mode == "fixed") {
        if (distinct_graphs != 1)
            throw ValidationError("mode 'fixed' needs exactly one distinct graph in the "
                                  "switching order, found " +
                                  std::to_string(distinct_graphs));
        return Mode::fixed_topology;
    }
    if (mode == "switched") return Mode::switched;
    if (mode == "auto")
        return distinct_graphs == 1 ? Mode::fixed_topology : Mode::switched;
    throw ValidationError("unknown mode '" + mode + "'; use auto, fixed, or switched");
}

template <typename F>
int guard(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const AnalysisError& e) {
        err << "error: " << e.what() << "\n";
        return kExitAnalysisFailed;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitAnalysisFailed;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitBadInput;
    }
}

} // namespace

int cmd_analyze(const std::string& config_path, const std::string& mode, std::ostream& out,
                std::ostream& err) {
    return guard(err, [&] {
        const ScenarioConfig cfg = load_scenario(config_path);
        const auto topologies = build_topologies(cfg);
        if (resolve_mode(mode, topologies.size()) == Mode::fixed_topology)
            out << report_to_json(analyze_fixed(topologies.front(), cfg.gain_k, cfg.q));
        else
            out << report_to_json(analyze_switched(topologies, cfg.gain_k, cfg.q));
        return kExitOk;
    });
}

int cmd_simulate(const std::string& config_path, const std::string& out_path,
                 std::optional<unsigned> seed, std::ostream& out, std::ostream& err) {
    return guard(err, [&] {
        const ScenarioConfig cfg = load_scenario(config_path);
        const SimConfig sim = build_sim_config(cfg, seed);
        const Trajectory tr = integrate(sim);

        std::ofstream file(out_path, std::ios::binary);
        if (!file) throw ValidationError("cannot open output file '" + out_path + "'");
        write_trajectory_csv(file, tr);
        file.flush();
        if (!file) throw ValidationError("failed while writing '" + out_path + "'");

        out << "wrote " << out_path << ": " << tr.samples() << " samples";
        if (tr.diverged) {
            out << "; DIVERGED after t = " << tr.times.back() << "\n";
            return kExitDiverged;
        }
        const ErrorMetrics m = error_metrics(tr);
        out << "; final err x = " << m.final_err_x << ", v = " << m.final_err_v;
        if (m.settle_time)
            out << "; settled at t = " << *m.settle_time;
        else
            out << "; not settled";
        out << "\n";
        return kExitOk;
    });
}

int cmd_scenario(const std::string& name, std::ostream& out, std::ostream& err) {
    return guard(err, [&] {
        out << scenario_to_json(builtin_scenario(name));
        return kExitOk;
    });
}

int cmd_check(const std::string& config_path, const std::string& mode, std::ostream& out,
              std::ostream& err) {
    return guard(err, [&] {
        const ScenarioConfig cfg = load_scenario(config_path);
        const auto topologies = build_topologies(cfg);
        const Mode m = resolve_mode(mode, topologies.size());
        if (!(cfg.q > 1.0))
            throw ValidationError("config: field 'q' must exceed 1, got " +
                                  std::to_string(cfg.q));

        int failures = 0;
        bool reachable = true;
        for (const auto& t : topologies) reachable = reachable && leader_globally_reachable(t);
        if (reachable) {
            out << "PASS reachability: leader globally reachable in all "
                << topologies.size() << (topologies.size() == 1 ? " topology" : " topologies")
                << "\n";
        } else {
            out << "FAIL reachability: leader not globally reachable in every topology\n";
            ++failures;
        }

        std::optional<double> gate;
        std::optional<double> tau;
        std::string note = reachable ? "" : "leader unreachable";
        if (reachable) {
            try {
                if (m == Mode::fixed_topology) {
                    gate = fixed_constants(topologies.front()).gate();
                    if (cfg.gain_k > *gate)
                        tau = analyze_fixed(topologies.front(), cfg.gain_k, cfg.q).tau;
                } else {
                    gate = switched_constants(topologies).gate();
                    if (cfg.gain_k > *gate)
                        tau = analyze_switched(topologies, cfg.gain_k, cfg.q).tau;
                }
            } catch (const AnalysisError& e) {
                note = e.what();
            }
        }

        if (gate && cfg.gain_k > *gate) {
            out << "PASS gain threshold: k = " << cfg.gain_k << " > k* = " << *gate
                << " (conservative reading)\n";
        } else if (gate) {
            out << "FAIL gain threshold: k = " << cfg.gain_k << " <= k* = " << *gate
                << " (conservative reading)\n";
            ++failures;
        } else {
            out << "FAIL gain threshold: not evaluated (" << note << ")\n";
            ++failures;
        }

        if (tau) {
            const double sup = max_delay(cfg.delay);
            if (validate_delay_against_bound(cfg.delay, *tau)) {
                out << "PASS delay bound: sup r = " << sup << " < tau = " << *tau << "\n";
            } else {
                out << "FAIL delay bound: sup r = " << sup << " >= tau = " << *tau << "\n";
                ++failures;
            }
        } else {
            out << "FAIL delay bound: not evaluated ("
                << (note.empty() ? "gain threshold not met" : note) << ")\n";
            ++failures;
        }
        return failures == 0 ? kExitOk : kExitCheckFailed;
    });
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Stability margins and delayed-dynamics simulation for "
                 "leader-following agent networks"};
    app.name("lfc");
    app.require_subcommand(1);

    std::string config_path;
    std::string mode = "auto";
    std::string out_path;
    std::string name;
    unsigned seed_value = 0;

    auto* analyze = app.add_subcommand("analyze", "Compute stability margins for a scenario");
    analyze->add_option("config", config_path, "scenario JSON file")->required();
    analyze->add_option("--mode", mode, "auto, fixed, or switched")
        ->capture_default_str()
        ->check(CLI::IsMember({"auto", "fixed", "switched"}));

    auto* simulate =
        app.add_subcommand("simulate", "Integrate the closed loop and write a trajectory CSV");
    simulate->add_option("config", config_path, "scenario JSON file")->required();
    simulate->add_option("--out", out_path, "output CSV path")->required();
    auto* seed_opt =
        simulate->add_option("--seed", seed_value, "override the config's init_seed");

    auto* scenario = app.add_subcommand("scenario", "Print a built-in scenario config");
    scenario->add_option("name", name, "fig1, fig2, or switched")->required();

    auto* check = app.add_subcommand(
        "check", "Verify reachability, gain threshold, and delay bound (PASS/FAIL lines)");
    check->add_option("config", config_path, "scenario JSON file")->required();
    check->add_option("--mode", mode, "auto, fixed, or switched")
        ->capture_default_str()
        ->check(CLI::IsMember({"auto", "fixed", "switched"}));

    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitBadInput;
    }

    if (analyze->parsed()) return cmd_analyze(config_path, mode, out, err);
    if (simulate->parsed()) {
        std::optional<unsigned> seed;
        if (seed_opt->count() > 0) seed = seed_value;
        return cmd_simulate(config_path, out_path, seed, out, err);
    }
    if (scenario->parsed()) return cmd_scenario(name, out, err);
    if (check->parsed()) return cmd_check(config_path, mode, out, err);
    return kExitBadInput;
}

} // namespace lfc
