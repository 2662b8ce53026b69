#include "sailhelm/scenario.hpp"

#include <cmath>

#include "sailhelm/navigator.hpp"

namespace sailhelm {

namespace {

double initial_speed(const RunConfig& config, const EnvState& env, Bearing heading) {
  if (config.initial.speed) return *config.initial.speed;
  const double true_angle = relative_wind(heading, env.mean_wind).abs();
  return steady_speed(heading, env, sheet_from_table(config.sheet_table, true_angle), config.sim);
}

TimestepRow make_row(double t, const BoatPhysState& boat, const BoatObservation& obs,
                     const Actuation& act, const Helm& helm) {
  TimestepRow row;
  row.t = t;
  row.x = boat.position.x;
  row.y = boat.position.y;
  row.heading = boat.heading.degrees();
  row.speed = boat.speed;
  row.yaw_rate = boat.yaw_rate;
  row.rel_wind = obs.apparent_wind_angle.degrees();
  row.rudder = act.rudder;
  row.sheet = act.sheet;
  row.mode = helm.mode();
  row.active_procedure = helm.active_procedure();
  return row;
}

}  // namespace

RunResult run_scenario(const RunConfig& config, const std::optional<HistoryMap>& starting_histories) {
  config.validate();
  Rng rng(config.seed);
  const SimConfig& sim = config.sim;

  EnvState env = config.initial_env();
  randomize_env(env, rng);

  Helm helm(config.helm_config());
  for (const auto& [id, values] : starting_histories ? *starting_histories : config.initial_histories) {
    // State files may mention procedures this run does not use.
    if (helm.book().selector().contains(id)) {
      helm.book().selector().set_history(id, AttemptHistory(values));
    }
  }

  BoatPhysState boat;
  boat.position = {config.initial.x, config.initial.y};
  boat.heading = Bearing(config.initial.heading);
  boat.speed = initial_speed(config, env, boat.heading);

  NavState nav;
  nav.leg_origin = boat.position;
  const auto& waypoints = config.navigation.waypoints;

  RunResult result;
  const auto last_step = static_cast<long>(std::ceil(config.max_sim_time / sim.dt - 1e-9));
  result.timesteps.reserve(static_cast<std::size_t>(last_step) + 1);

  for (long k = 0;; ++k) {
    const double t = static_cast<double>(k) * sim.dt;
    const BoatObservation obs = observe(boat, env, sim, rng);
    const HelmCommand cmd = navigate(waypoints, nav, obs, boat.position, env.mean_wind,
                                     config.navigation, sim.no_go_angle);
    helm.set_manual_override(t < config.manual.until && !config.manual.record_attempts);
    const HelmStepResult step = helm.step(cmd, obs, t, sim.dt, rng);
    if (step.tack_completed) notify_tack_completed(nav);

    result.timesteps.push_back(make_row(t, boat, obs, step.actuation, helm));
    if (nav.finished(waypoints) || k >= last_step) break;

    boat = step_boat(boat, step.actuation, env, sim.dt, sim);
    env = step_env(env, sim.dt, rng);
  }

  result.attempts = helm.attempt_log();
  result.summary = compute_metrics(result.timesteps, result.attempts, config);
  result.final_histories = histories_of(helm.book().selector());
  return result;
}

ManoeuvreTrialResult run_manoeuvre_trial(const ManoeuvreTrialConfig& config) {
  Rng rng(config.seed);
  const SimConfig& sim = config.sim;
  const Bearing wind_from(0.0);

  EnvState env;
  env.mean_wind = WindVector(wind_from, config.wind_speed);
  env.gust_std = config.gust_std_ratio * config.wind_speed;
  env.wave_height = config.wave_height;
  env.wave_period = config.wave_period;
  env.validate();
  randomize_env(env, rng);

  HelmConfig hc;
  hc.selector.timeout = config.timeout;
  hc.selector.exploration_coefficient = 0.0;
  hc.selector.initial_order = {config.procedure};
  hc.procedures = config.procedures;
  hc.pid = config.pid;
  hc.sheet_table = config.sheet_table;
  Helm helm(hc);

  const Bearing port_beat = beat_heading(wind_from, TackSide::Port, config.beat_angle);
  const Bearing starboard_beat = beat_heading(wind_from, TackSide::Starboard, config.beat_angle);

  BoatPhysState boat;
  boat.heading = port_beat;
  boat.speed = steady_speed(boat.heading, env, sheet_from_table(hc.sheet_table, config.beat_angle),
                            sim);

  double t = 0.0;
  const auto advance = [&](const HelmCommand& cmd) {
    const BoatObservation obs = observe(boat, env, sim, rng);
    const HelmStepResult step = helm.step(cmd, obs, t, sim.dt, rng);
    boat = step_boat(boat, step.actuation, env, sim.dt, sim);
    env = step_env(env, sim.dt, rng);
    t += sim.dt;
    return step.tack_completed;
  };

  const auto warmup_steps = static_cast<long>(std::llround(config.warmup / sim.dt));
  for (long k = 0; k < warmup_steps; ++k) advance(HoldHeading{port_beat});

  const Vec2 origin = boat.position;
  const double t0 = t;
  ManoeuvreTrialResult result;
  bool tacking = true;
  while (t < t0 + config.horizon - kTimeEpsilon) {
    const bool completed =
        advance(tacking ? HelmCommand{SwitchTack{}} : HelmCommand{HoldHeading{starboard_beat}});
    if (completed) {
      tacking = false;
      result.success = true;
      result.elapsed = helm.attempt_log().back().elapsed;
    } else if (tacking && !helm.attempt_log().empty()) {
      return result;  // the only attempt timed out
    }
    const double progress = distance_made_good(boat.position - origin, wind_from);
    if (!result.time_to_progress && progress >= config.progress_target) {
      result.time_to_progress = t - t0;
    }
  }
  result.distance_made_good = distance_made_good(boat.position - origin, wind_from);
  return result;
}

}  // namespace sailhelm
