#pragma once

// Deterministic sailing-boat test bed.
//
// Yaw follows a first-order (Nomoto) response whose rudder authority scales
// with speed through the water, so a boat that stalls head-to-wind stays
// there. Speed relaxes toward a polar target reduced by sheet mis-trim and
// by turning drag. Waves add a single-frequency yaw moment that a slow boat
// cannot resist; gusts are an Ornstein-Uhlenbeck offset on the mean wind.

#include <cstdint>
#include <vector>

#include "sailhelm/geometry.hpp"
#include "sailhelm/interp.hpp"
#include "sailhelm/procedures.hpp"
#include "sailhelm/random.hpp"

namespace sailhelm {

struct SimConfig {
  double dt = 0.1;                      // s
  double rudder_gain = 2.5;             // (deg/s) per (deg rudder * m/s)
  double yaw_time_constant = 1.0;       // s
  double speed_time_constant = 2.0;     // s
  double turn_drag_coefficient = 0.0025;  // (m/s^2) of deceleration per deg/s of yaw
  double wave_yaw_gain = 1000.0;        // deg/s of yaw per metre of wave height
  double wave_speed_reference = 0.3;    // m/s; wave yaw is divided by (1 + speed / ref)
  /// Peak yaw (deg/s per m/s of wind) pushing a bow inside the no-go zone away
  /// from the wind, attenuated with speed like the wave term. Zero exactly
  /// head to wind and outside the zone.
  double fall_off_gain = 1.0;
  double no_go_angle = 30.0;            // deg off the true wind
  /// Boat speed / true wind speed against |true wind angle|.
  PiecewiseLinear polar = default_polar();
  /// Sheet setting giving full drive against |apparent wind angle|.
  PiecewiseLinear optimal_sheet = default_optimal_sheet();
  double sheet_efficiency_floor = 0.3;  // drive left when fully mis-sheeted
  double sheet_efficiency_width = 0.5;  // sheet error at which drive has fallen by 1/e
  double observation_noise_deg = 0.0;   // std of heading and wind-angle noise

  static PiecewiseLinear default_polar();
  static PiecewiseLinear default_optimal_sheet();

  void validate() const;
  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

struct EnvState {
  WindVector mean_wind{Bearing(0.0), 2.06};
  double gust_state = 0.0;              // m/s offset from the mean
  double gust_std = 0.125 * 2.06;       // stationary std of the offset
  double gust_time_constant = 5.0;      // s
  double direction_drift_rate = 0.0;    // deg/s
  double wave_height = 0.0;             // m
  double wave_period = 2.0;             // s
  double wave_phase = 0.0;              // rad

  /// Mean direction, speed mean + gust clamped at zero.
  [[nodiscard]] WindVector instantaneous_wind() const;
  void validate() const;
};

struct BoatPhysState {
  Vec2 position;
  Bearing heading;
  double yaw_rate = 0.0;  // deg/s
  double speed = 0.0;     // m/s through the water along the heading

  [[nodiscard]] Vec2 velocity() const;
  friend bool operator==(const BoatPhysState&, const BoatPhysState&) = default;
};

/// Throws InvalidInput outside [0, 180].
[[nodiscard]] double polar_speed(double rel_wind_abs, double wind_speed, const SimConfig& cfg);

/// Fraction of polar drive available at this sheet setting, in [floor, 1].
[[nodiscard]] double sheet_efficiency(double sheet, double apparent_wind_abs, const SimConfig& cfg);

/// Random wave phase and a stationary gust draw.
void randomize_env(EnvState& env, Rng& rng);

[[nodiscard]] EnvState step_env(const EnvState& env, double dt, Rng& rng);

[[nodiscard]] BoatPhysState step_boat(const BoatPhysState& boat, const Actuation& act,
                                      const EnvState& env, double dt, const SimConfig& cfg);

/// Sensor view. Noise draws are taken only when observation_noise_deg > 0.
[[nodiscard]] BoatObservation observe(const BoatPhysState& boat, const EnvState& env,
                                      const SimConfig& cfg, Rng& rng);

/// Boat speed the polar and trim settle to at a fixed heading.
[[nodiscard]] double steady_speed(Bearing heading, const EnvState& env, double sheet,
                                  const SimConfig& cfg);

}  // namespace sailhelm
