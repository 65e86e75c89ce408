#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "modecap/dofcore.hpp"
#include "modecap/simulation.hpp"

namespace modecap {

// Exit codes of the modecap tool.
enum ExitCode : int
{
  kExitOk = 0,
  kExitFailure = 1,
  kExitParse = 2,
  kExitDomain = 3,
  kExitIo = 4,
  kExitResolution = 5,
};

struct SweepGrid
{
  std::vector<double> a, b, d, rho;
};

struct RunConfig
{
  std::optional<Scenario> scenario;           // resolved from either input block
  std::optional<NormalizedParams> normalized; // set when the normalized block was used
  std::optional<SweepGrid> sweep;
  SimulationConfig simulation;
  std::optional<std::string> out_path;
  std::optional<std::string> format;
};

/// Parses the JSON config. Unknown keys, wrong types and mixing the scenario
/// and normalized blocks raise ConfigError; values are not range-checked.
RunConfig parse_config(std::string_view text);

/// CSV rows in lexicographic (a, b, d, rho) order under the fixed header.
std::string sweep_csv(SweepGrid const &grid);
nlohmann::json sweep_json(SweepGrid const &grid);

nlohmann::json compute_report(Scenario const &s, std::optional<NormalizedParams> const &normalized = std::nullopt);
nlohmann::json simulate_report(Scenario const &s, SimulationConfig const &config,
                               std::optional<NormalizedParams> const &normalized = std::nullopt);

/// Full command-line entry point; args excludes the program name.
int run_cli(std::vector<std::string> const &args, std::ostream &out, std::ostream &err);

} // namespace modecap
