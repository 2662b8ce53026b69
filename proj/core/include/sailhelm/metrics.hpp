#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sailhelm/config.hpp"
#include "sailhelm/helming.hpp"

namespace sailhelm {

/// One row of timesteps.csv.
struct TimestepRow {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
  double speed = 0.0;
  double yaw_rate = 0.0;
  double rel_wind = 0.0;  // apparent, as the helm saw it
  double rudder = 0.0;
  double sheet = 0.0;
  HelmMode mode = HelmMode::Cruise;
  std::optional<ProcedureId> active_procedure;

  friend bool operator==(const TimestepRow&, const TimestepRow&) = default;
};

struct ProcedureStats {
  int attempts = 0;
  int successes = 0;
  /// Unset without attempts.
  std::optional<double> success_rate;
  /// Unset without successes.
  std::optional<double> mean_success_time;

  friend bool operator==(const ProcedureStats&, const ProcedureStats&) = default;
};

enum class RunStatus { Completed, Timeout };

[[nodiscard]] const char* to_string(RunStatus status);

struct RunSummary {
  RunStatus status = RunStatus::Completed;
  int tack_commands_issued = 0;
  int total_attempts = 0;
  /// Every procedure in the configured list appears, attempted or not.
  std::map<ProcedureId, ProcedureStats> procedures;
  double distance_made_good = 0.0;  // m, toward the initial mean wind
  int waypoints_reached = 0;
  int waypoints_total = 0;
  double total_sim_time = 0.0;  // s

  friend bool operator==(const RunSummary&, const RunSummary&) = default;
};

/// Aggregates a finished run. Distance made good projects the net
/// displacement onto the direction the configured wind comes from; waypoints
/// are counted by walking the track with the acceptance radius.
[[nodiscard]] RunSummary compute_metrics(const std::vector<TimestepRow>& timesteps,
                                         const std::vector<TackAttemptRecord>& attempts,
                                         const RunConfig& config);

/// Distance made good of `displacement` against a wind from `wind_from`.
[[nodiscard]] double distance_made_good(Vec2 displacement, Bearing wind_from);

}  // namespace sailhelm
