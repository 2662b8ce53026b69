#pragma once

// Run configuration: everything a scenario needs, loadable from a JSON file
// with dotted-key overrides (`sim.wind.speed=3`).

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sailhelm/errors.hpp"
#include "sailhelm/geometry.hpp"
#include "sailhelm/helming.hpp"
#include "sailhelm/simulator.hpp"

namespace sailhelm {

/// Malformed or out-of-range configuration. The CLI maps it to exit code 1.
class ConfigError : public InvalidInput {
 public:
  explicit ConfigError(const std::string& what) : InvalidInput(what) {}
};

struct WindSettings {
  double speed = 2.06;               // m/s (4 kn)
  double from = 0.0;                 // deg, compass
  double gust_std_ratio = 0.125;     // stationary gust std / mean speed
  double gust_time_constant = 5.0;   // s
  double direction_drift_rate = 0.0; // deg/s

  friend bool operator==(const WindSettings&, const WindSettings&) = default;
};

struct WaveSettings {
  double height = 0.0;  // m
  double period = 2.0;  // s

  friend bool operator==(const WaveSettings&, const WaveSettings&) = default;
};

struct InitialState {
  double x = 0.0;
  double y = 0.0;
  double heading = 310.0;
  /// Unset means the steady speed for the initial heading and trim.
  std::optional<double> speed;

  friend bool operator==(const InitialState&, const InitialState&) = default;
};

struct NavigationSettings {
  std::vector<Vec2> waypoints = {{0.0, 20.0}, {0.0, 0.0}};
  double acceptance_radius = 1.5;    // m
  double corridor_half_width = 8.0;  // m
  double beat_angle = 50.0;          // deg off the true wind
  /// Beat when the target lies within no_go_angle + upwind_margin of the wind.
  double upwind_margin = 15.0;       // deg

  friend bool operator==(const NavigationSettings&, const NavigationSettings&) = default;
};

struct ManualPhase {
  /// The helm is overridden for t < until.
  double until = 0.0;
  /// Let the helm run (and learn) during the manual phase anyway.
  bool record_attempts = false;

  friend bool operator==(const ManualPhase&, const ManualPhase&) = default;
};

struct RunConfig {
  std::uint64_t seed = 42;
  double max_sim_time = 600.0;  // s

  SelectorConfig selector{30.0,
                          0.3,
                          {ProcedureId::BasicTack, ProcedureId::TackSheetOut,
                           ProcedureId::TackIncreaseAngleToWind, ProcedureId::BasicJibe}};
  /// Starting histories, keyed by procedure.
  std::map<ProcedureId, std::vector<double>> initial_histories;
  /// Histories are loaded from and saved to this file when set.
  std::string state_file;

  ProcedureParams procedures;
  PidGains pid;
  SheetTable sheet_table;
  SimConfig sim;
  WindSettings wind;
  WaveSettings waves;
  InitialState initial;
  NavigationSettings navigation;
  ManualPhase manual;

  /// Throws ConfigError on the first violated constraint.
  void validate() const;

  [[nodiscard]] HelmConfig helm_config() const;
  [[nodiscard]] EnvState initial_env() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses JSON text, then applies `key=value` overrides. Values are read as
/// JSON where possible (`3`, `true`, `[1,2]`) and as strings otherwise.
/// Unknown keys and bad values raise ConfigError.
[[nodiscard]] RunConfig parse_run_config(std::string_view json_text,
                                         const std::vector<std::string>& overrides = {});

[[nodiscard]] RunConfig load_run_config(const std::filesystem::path& path,
                                        const std::vector<std::string>& overrides = {});

/// Full configuration as pretty-printed JSON; parse_run_config reads it back
/// to an identical value.
[[nodiscard]] std::string dump_run_config(const RunConfig& config);

/// Histories persisted between runs.
using HistoryMap = std::map<ProcedureId, std::vector<double>>;

[[nodiscard]] HistoryMap histories_of(const SelectorState& selector);
/// Missing file yields an empty map.
[[nodiscard]] HistoryMap load_state_file(const std::filesystem::path& path);
void save_state_file(const std::filesystem::path& path, const HistoryMap& histories);

}  // namespace sailhelm
