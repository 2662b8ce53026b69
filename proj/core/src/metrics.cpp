#include "sailhelm/metrics.hpp"

#include <set>

namespace sailhelm {

const char* to_string(RunStatus status) {
  return status == RunStatus::Completed ? "completed" : "timeout";
}

double distance_made_good(Vec2 displacement, Bearing wind_from) {
  return dot(displacement, unit_vector(wind_from));
}

RunSummary compute_metrics(const std::vector<TimestepRow>& timesteps,
                           const std::vector<TackAttemptRecord>& attempts,
                           const RunConfig& config) {
  RunSummary s;
  for (ProcedureId id : config.selector.initial_order) s.procedures[id] = {};

  std::set<int> commands;
  std::map<ProcedureId, double> success_time;
  for (const auto& a : attempts) {
    commands.insert(a.command_index);
    auto& stats = s.procedures[a.procedure];
    ++stats.attempts;
    if (a.outcome == AttemptOutcome::Success) {
      ++stats.successes;
      success_time[a.procedure] += a.elapsed;
    }
  }
  s.tack_commands_issued = static_cast<int>(commands.size());
  s.total_attempts = static_cast<int>(attempts.size());
  for (auto& [id, stats] : s.procedures) {
    if (stats.attempts > 0) stats.success_rate = double(stats.successes) / stats.attempts;
    if (stats.successes > 0) stats.mean_success_time = success_time[id] / stats.successes;
  }

  const auto& wps = config.navigation.waypoints;
  s.waypoints_total = static_cast<int>(wps.size());
  std::size_t next = 0;
  for (const auto& row : timesteps) {
    const Vec2 p{row.x, row.y};
    while (next < wps.size() && norm(wps[next] - p) <= config.navigation.acceptance_radius) ++next;
  }
  s.waypoints_reached = static_cast<int>(next);
  s.status = next == wps.size() ? RunStatus::Completed : RunStatus::Timeout;

  if (!timesteps.empty()) {
    const Vec2 start{timesteps.front().x, timesteps.front().y};
    const Vec2 end{timesteps.back().x, timesteps.back().y};
    s.distance_made_good = distance_made_good(end - start, Bearing(config.wind.from));
    s.total_sim_time = timesteps.back().t;
  }
  return s;
}

}  // namespace sailhelm
