#pragma once

// Minimal high-level navigator: beats inside a corridor when the target is
// upwind, otherwise points straight at it.

#include <cstddef>
#include <vector>

#include "sailhelm/config.hpp"
#include "sailhelm/helming.hpp"

namespace sailhelm {

struct NavState {
  std::size_t target_index = 0;
  Vec2 leg_origin;
  /// Latched from the corridor exit until the helm reports completion.
  bool tack_pending = false;
  /// Forces one HoldHeading after a finished tack so the next request is a
  /// fresh rising edge for the helm.
  bool settle_after_tack = false;

  [[nodiscard]] bool finished(const std::vector<Vec2>& waypoints) const {
    return target_index >= waypoints.size();
  }
};

/// Bearing to beat at, `beat_angle` off the wind with the wind on `side`.
[[nodiscard]] Bearing beat_heading(Bearing wind_from, TackSide side, double beat_angle);

/// Signed distance from the line origin -> target, positive to its right.
/// Degenerate legs measure against the wind axis through the target.
[[nodiscard]] double cross_track(Vec2 origin, Vec2 target, Vec2 position, Bearing wind_from);

/// One navigation decision.
///
/// Advances the target once within the acceptance radius (the new leg starts
/// at the reached waypoint). With the target within no_go_angle +
/// upwind_margin of the wind it holds the beat heading on the current side
/// and latches SwitchTack when the boat is outside the corridor and still
/// moving away from its centre line. Otherwise it steers at the target,
/// except that a target lying upwind on the other tack (the layline has been
/// crossed) latches SwitchTack instead of turning through the wind by PID.
/// Returns HoldHeading(current heading) once every waypoint is reached.
[[nodiscard]] HelmCommand navigate(const std::vector<Vec2>& waypoints, NavState& state,
                                   const BoatObservation& obs, Vec2 position,
                                   const WindVector& wind, const NavigationSettings& nav,
                                   double no_go_angle);

/// Clears the latch after the helm reports a finished tack.
void notify_tack_completed(NavState& state);

}  // namespace sailhelm
