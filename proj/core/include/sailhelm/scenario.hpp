#pragma once

// Closed-loop runs: observe -> navigate -> helm -> physics at a fixed step.

#include <cstdint>
#include <optional>
#include <vector>

#include "sailhelm/config.hpp"
#include "sailhelm/metrics.hpp"

namespace sailhelm {

struct RunResult {
  std::vector<TimestepRow> timesteps;
  std::vector<TackAttemptRecord> attempts;
  RunSummary summary;
  /// Selector histories at the end of the run.
  HistoryMap final_histories;

  [[nodiscard]] bool aborted() const { return summary.status == RunStatus::Timeout; }
};

/// Runs until every waypoint is reached or max_sim_time elapses. Every
/// random draw comes from one engine seeded with config.seed, so the result
/// is a pure function of the config. `starting_histories`, when given,
/// replaces config.initial_histories (used for state files).
[[nodiscard]] RunResult run_scenario(const RunConfig& config,
                                     const std::optional<HistoryMap>& starting_histories = {});

/// A single change of tack from a settled close-hauled course, used to
/// calibrate the simulator and to compare procedures.
struct ManoeuvreTrialConfig {
  ProcedureId procedure = ProcedureId::BasicTack;
  double wind_speed = 2.06;       // m/s, from North
  double gust_std_ratio = 0.125;
  double wave_height = 0.0;       // m
  double wave_period = 2.0;       // s
  double beat_angle = 50.0;       // deg
  double warmup = 10.0;           // s on the initial port-tack beat
  double timeout = 30.0;          // s, single attempt
  double horizon = 60.0;          // s after the command for progress metrics
  double progress_target = 15.0;  // m of upwind progress to time
  std::uint64_t seed = 1;
  SimConfig sim;
  ProcedureParams procedures;
  PidGains pid;
  SheetTable sheet_table;
};

struct ManoeuvreTrialResult {
  /// The single attempt reached the other tack within the timeout.
  bool success = false;
  double elapsed = 0.0;  // s, valid when success
  /// Upwind progress over the horizon, measured from the command.
  double distance_made_good = 0.0;
  /// Seconds from the command until progress_target was made good.
  std::optional<double> time_to_progress;
};

/// After a warm-up beat on port tack the helm is ordered to switch tack with
/// `procedure` as the only entry. A failed attempt ends the trial; a
/// successful one is followed by a beat on the new tack until the horizon.
[[nodiscard]] ManoeuvreTrialResult run_manoeuvre_trial(const ManoeuvreTrialConfig& config);

}  // namespace sailhelm
