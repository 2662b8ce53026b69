#include "sailhelm/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sailhelm/errors.hpp"

namespace sailhelm {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

}  // namespace

PiecewiseLinear SimConfig::default_polar() {
  // 0.75 m/s close hauled (50 deg) in 2.06 m/s (4 kn) of wind.
  return PiecewiseLinear({{30.0, 0.0},
                          {50.0, 0.75 / 2.06},
                          {70.0, 0.50},
                          {90.0, 0.56},
                          {110.0, 0.56},
                          {135.0, 0.50},
                          {180.0, 0.42}});
}

PiecewiseLinear SimConfig::default_optimal_sheet() {
  return PiecewiseLinear({{50.0, 0.0}, {80.0, 0.3}, {135.0, 0.7}, {180.0, 1.0}});
}

void SimConfig::validate() const {
  if (!(dt > 0.0)) throw InvalidInput("sim.dt must be > 0");
  if (!(yaw_time_constant > 0.0)) throw InvalidInput("sim.yaw_time_constant must be > 0");
  if (!(speed_time_constant >= dt)) {
    throw InvalidInput("sim.speed_time_constant must be >= dt (Euler would overshoot)");
  }
  if (!(rudder_gain >= 0.0)) throw InvalidInput("sim.rudder_gain must be >= 0");
  if (!(turn_drag_coefficient >= 0.0)) throw InvalidInput("sim.turn_drag_coefficient must be >= 0");
  if (!(wave_yaw_gain >= 0.0)) throw InvalidInput("sim.wave_yaw_gain must be >= 0");
  if (!(wave_speed_reference > 0.0)) throw InvalidInput("sim.wave_speed_reference must be > 0");
  if (!(fall_off_gain >= 0.0)) throw InvalidInput("sim.fall_off_gain must be >= 0");
  if (!(no_go_angle >= 0.0 && no_go_angle < 180.0)) {
    throw InvalidInput("sim.no_go_angle must be in [0, 180)");
  }
  if (!(sheet_efficiency_floor >= 0.0 && sheet_efficiency_floor <= 1.0)) {
    throw InvalidInput("sim.sheet_efficiency_floor must be in [0, 1]");
  }
  if (!(sheet_efficiency_width > 0.0)) throw InvalidInput("sim.sheet_efficiency_width must be > 0");
  if (!(observation_noise_deg >= 0.0)) throw InvalidInput("sim.observation_noise_deg must be >= 0");
  for (const auto& p : polar.points()) {
    if (p.y < 0.0) throw InvalidInput("polar speed ratios must be >= 0");
  }
}

WindVector EnvState::instantaneous_wind() const {
  return WindVector(mean_wind.from_direction, std::max(0.0, mean_wind.speed + gust_state));
}

void EnvState::validate() const {
  if (!(gust_std >= 0.0)) throw InvalidInput("wind gust std must be >= 0");
  if (!(gust_time_constant > 0.0)) throw InvalidInput("wind gust time constant must be > 0");
  if (!std::isfinite(direction_drift_rate)) throw InvalidInput("wind drift rate must be finite");
  if (!(wave_height >= 0.0)) throw InvalidInput("wave height must be >= 0");
  if (!(wave_period > 0.0)) throw InvalidInput("wave period must be > 0");
}

Vec2 BoatPhysState::velocity() const { return speed * unit_vector(heading); }

double polar_speed(double rel_wind_abs, double wind_speed, const SimConfig& cfg) {
  if (!(rel_wind_abs >= 0.0 && rel_wind_abs <= 180.0)) {
    throw InvalidInput("polar query angle must be within [0, 180], got " +
                       std::to_string(rel_wind_abs));
  }
  if (rel_wind_abs < cfg.no_go_angle) return 0.0;
  return std::max(0.0, cfg.polar(rel_wind_abs)) * wind_speed;
}

double sheet_efficiency(double sheet, double apparent_wind_abs, const SimConfig& cfg) {
  const double err = (sheet - cfg.optimal_sheet(apparent_wind_abs)) / cfg.sheet_efficiency_width;
  const double floor = cfg.sheet_efficiency_floor;
  return floor + (1.0 - floor) * std::exp(-err * err);
}

void randomize_env(EnvState& env, Rng& rng) {
  env.wave_phase = kTwoPi * rng.uniform01();
  env.gust_state = env.gust_std * rng.normal();
}

EnvState step_env(const EnvState& env, double dt, Rng& rng) {
  EnvState next = env;
  // Exact discretisation of the OU process keeps the stationary std at any dt.
  const double a = std::exp(-dt / env.gust_time_constant);
  next.gust_state = a * env.gust_state + env.gust_std * std::sqrt(1.0 - a * a) * rng.normal();
  next.mean_wind.from_direction =
      Bearing(env.mean_wind.from_direction.degrees() + env.direction_drift_rate * dt);
  next.wave_phase = std::fmod(env.wave_phase + kTwoPi * dt / env.wave_period, kTwoPi);
  return next;
}

BoatPhysState step_boat(const BoatPhysState& boat, const Actuation& act, const EnvState& env,
                        double dt, const SimConfig& cfg) {
  const WindVector wind = env.instantaneous_wind();
  const double true_angle = relative_wind(boat.heading, wind).abs();
  const double apparent_angle =
      relative_wind(boat.heading, apparent_wind(wind, boat.velocity())).abs();

  const double wave_yaw = cfg.wave_yaw_gain * env.wave_height * std::sin(env.wave_phase) /
                          (1.0 + boat.speed / cfg.wave_speed_reference);
  // Inside the no-go zone the wind pushes a slow bow off to whichever side it
  // is already on; zero exactly head to wind and at the edge of the zone.
  const double rel_true = relative_wind(boat.heading, wind).degrees();
  const double fall_off =
      std::fabs(rel_true) < cfg.no_go_angle
          ? -cfg.fall_off_gain * wind.speed * std::sin(kPi * rel_true / cfg.no_go_angle) /
                (1.0 + boat.speed / cfg.wave_speed_reference)
          : 0.0;
  const double yaw_accel =
      (cfg.rudder_gain * act.rudder * boat.speed + wave_yaw + fall_off - boat.yaw_rate) /
      cfg.yaw_time_constant;

  const double target = polar_speed(true_angle, wind.speed, cfg) *
                        sheet_efficiency(act.sheet, apparent_angle, cfg);
  const double speed_rate = (target - boat.speed) / cfg.speed_time_constant -
                            cfg.turn_drag_coefficient * std::fabs(boat.yaw_rate);

  BoatPhysState next;
  next.position = boat.position + dt * boat.velocity();
  next.heading = Bearing(boat.heading.degrees() + boat.yaw_rate * dt);
  next.yaw_rate = boat.yaw_rate + yaw_accel * dt;
  next.speed = std::max(0.0, boat.speed + speed_rate * dt);
  return next;
}

BoatObservation observe(const BoatPhysState& boat, const EnvState& env, const SimConfig& cfg,
                        Rng& rng) {
  const WindVector app = apparent_wind(env.instantaneous_wind(), boat.velocity());
  double heading = boat.heading.degrees();
  double angle = relative_wind(boat.heading, app).degrees();
  if (cfg.observation_noise_deg > 0.0) {
    heading += cfg.observation_noise_deg * rng.normal();
    angle += cfg.observation_noise_deg * rng.normal();
  }
  BoatObservation obs;
  obs.heading = Bearing(heading);
  obs.apparent_wind_angle = SignedAngle(angle);
  obs.apparent_wind_speed = app.speed;
  obs.speed = boat.speed;
  return obs;
}

double steady_speed(Bearing heading, const EnvState& env, double sheet, const SimConfig& cfg) {
  // Apparent wind depends on the speed itself; a few fixed-point passes converge.
  const WindVector wind = env.instantaneous_wind();
  const double true_angle = relative_wind(heading, wind).abs();
  const double polar = polar_speed(true_angle, wind.speed, cfg);
  double v = polar;
  for (int i = 0; i < 50; ++i) {
    const double app = relative_wind(heading, apparent_wind(wind, v * unit_vector(heading))).abs();
    v = polar * sheet_efficiency(sheet, app, cfg);
  }
  return v;
}

}  // namespace sailhelm
