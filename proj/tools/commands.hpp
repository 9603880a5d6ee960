#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spherewave/flow.hpp"
#include "spherewave/scenarios.hpp"

namespace spherewave::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericalError = 3 };

struct RunConfig {
  std::string scenario = "case1";
  std::vector<double> lambda_grid{0.01};
  std::optional<double> mu;
  std::array<double, 2> mu_bracket{0.0, 0.3};
  double horizon = 5.0;  ///< in relative periods T(λ)
  int samples_per_period = 100;
  IntegratorConfig integrator;
  std::string out;
  std::uint64_t seed = 0;
  ScenarioOverrides overrides;

  /// Throws ConfigError.
  void validate() const;
};

nlohmann::ordered_json to_json(const RunConfig& cfg);
/// Strict: unknown keys and wrong types raise ConfigError.
RunConfig config_from_json(const nlohmann::json& j, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path);

/// Writes one CSV per λ into cfg.out (a directory, created if missing) and
/// returns the written paths.
std::vector<std::filesystem::path> cmd_simulate(const RunConfig& cfg);

nlohmann::ordered_json cmd_frequency(const RunConfig& cfg);
nlohmann::ordered_json cmd_drift(const RunConfig& cfg);
nlohmann::ordered_json cmd_verify(const RunConfig& cfg);
std::string cmd_bch(const AxisVector& x, const AxisVector& y, bool check);

/// Parses arguments and dispatches; returns the process exit code.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace spherewave::cli
