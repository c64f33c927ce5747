#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace lfc {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitBadInput = 2;
inline constexpr int kExitAnalysisFailed = 3;
inline constexpr int kExitDiverged = 4;

/// Print a stability report (JSON) for the scenario at config_path.
/// mode: "auto" picks fixed for a single distinct graph, switched otherwise.
int cmd_analyze(const std::string& config_path, const std::string& mode, std::ostream& out,
                std::ostream& err);

/// Integrate the scenario and write the trajectory CSV to out_path; a one
/// line summary goes to out. seed replaces the config's init_seed.
int cmd_simulate(const std::string& config_path, const std::string& out_path,
                 std::optional<unsigned> seed, std::ostream& out, std::ostream& err);

/// Print a built-in scenario config as JSON.
int cmd_scenario(const std::string& name, std::ostream& out, std::ostream& err);

/// Evaluate the three admissibility conditions (leader reachability, gain
/// above threshold, delay below the bound) with one PASS/FAIL line each.
int cmd_check(const std::string& config_path, const std::string& mode, std::ostream& out,
              std::ostream& err);

/// Dispatch on args (without the program name). Returns the process exit
/// code per the kExit* constants above.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace lfc
