#include "sailhelm/navigator.hpp"

#include <cmath>

namespace sailhelm {

namespace {

// z-component of a x b; positive when b points to the right of a on a
// North-up chart (x = East, y = North).
double cross(Vec2 a, Vec2 b) { return a.y * b.x - a.x * b.y; }

}  // namespace

Bearing beat_heading(Bearing wind_from, TackSide side, double beat_angle) {
  return Bearing(wind_from.degrees() - side_sign(side) * beat_angle);
}

double cross_track(Vec2 origin, Vec2 target, Vec2 position, Bearing wind_from) {
  Vec2 axis = target - origin;
  const double len = norm(axis);
  if (len < 1e-9) {
    axis = unit_vector(wind_from);
    origin = target;
  } else {
    axis = (1.0 / len) * axis;
  }
  return cross(axis, position - origin);
}

HelmCommand navigate(const std::vector<Vec2>& waypoints, NavState& state,
                     const BoatObservation& obs, Vec2 position, const WindVector& wind,
                     const NavigationSettings& nav, double no_go_angle) {
  while (!state.finished(waypoints) &&
         norm(waypoints[state.target_index] - position) <= nav.acceptance_radius) {
    state.leg_origin = waypoints[state.target_index];
    ++state.target_index;
    state.tack_pending = false;
  }
  if (state.finished(waypoints)) return HoldHeading{obs.heading};
  if (state.tack_pending) return SwitchTack{};
  const bool may_tack = !state.settle_after_tack;
  state.settle_after_tack = false;

  const Vec2 target = waypoints[state.target_index];
  const Bearing to_target = bearing_between(position, target);
  const double off_wind = signed_diff(to_target, wind.from_direction).abs();

  const SignedAngle rel = relative_wind(obs.heading, wind);
  const TackSide side = rel.degrees() == 0.0 ? TackSide::Starboard : tack_side(rel);

  if (off_wind > no_go_angle + nav.upwind_margin) {
    // Past the layline: reaching the target means turning the bow through
    // the wind, which is the helm's job, not the heading controller's.
    const SignedAngle wanted = relative_wind(to_target, wind);
    if (may_tack && wanted.degrees() != 0.0 && tack_side(wanted) != side && wanted.abs() < 90.0 &&
        rel.abs() < 90.0) {
      state.tack_pending = true;
      return SwitchTack{};
    }
    return HoldHeading{to_target};
  }

  const double offset = cross_track(state.leg_origin, target, position, wind.from_direction);
  if (may_tack && std::abs(offset) > nav.corridor_half_width) {
    Vec2 axis = target - state.leg_origin;
    if (norm(axis) < 1e-9) axis = unit_vector(wind.from_direction);
    const double drift = cross(axis, unit_vector(obs.heading));
    if (drift * offset > 0.0) {
      state.tack_pending = true;
      return SwitchTack{};
    }
  }
  return HoldHeading{beat_heading(wind.from_direction, side, nav.beat_angle)};
}

void notify_tack_completed(NavState& state) {
  state.tack_pending = false;
  state.settle_after_tack = true;
}

}  // namespace sailhelm
