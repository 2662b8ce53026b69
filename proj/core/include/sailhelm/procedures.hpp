#pragma once

// Tack and jibe manoeuvres as per-timestep actuation policies.

#include "sailhelm/geometry.hpp"
#include "sailhelm/selector.hpp"

namespace sailhelm {

/// Rudder in degrees, positive turns the bow to starboard. Sheet in [0, 1],
/// 0 = fully sheeted in, 1 = fully out.
struct Actuation {
  double rudder = 0.0;
  double sheet = 0.0;

  friend bool operator==(const Actuation&, const Actuation&) = default;
};

struct ProcedureParams {
  double rudder_max = 30.0;          // deg
  double sheet_out_delta = 0.2;      // added to the cruise sheet by TackSheetOut
  double bear_away_duration = 5.0;   // s, TackIncreaseAngleToWind run-up
  double bear_away_angle = 80.0;     // deg off the wind during the run-up
  double bear_away_gain = 1.0;       // deg rudder per deg heading error

  void validate() const;
  friend bool operator==(const ProcedureParams&, const ProcedureParams&) = default;
};

/// What the helming layer sees of the boat.
struct BoatObservation {
  Bearing heading;
  SignedAngle apparent_wind_angle;
  double apparent_wind_speed = 0.0;
  double speed = 0.0;
};

enum class ProcedurePhase { BearAway, Turning };

struct ProcedureRuntime {
  ProcedureId kind = ProcedureId::BasicTack;
  double start_time = 0.0;
  TackSide initial_side = TackSide::Port;
  double cruise_sheet = 0.0;  // sampled at start, held for the whole attempt
  ProcedurePhase phase = ProcedurePhase::Turning;
};

/// Runtime for a procedure starting now. Only TackIncreaseAngleToWind
/// begins in the BearAway phase.
[[nodiscard]] ProcedureRuntime start_procedure(ProcedureId kind, double now, TackSide side,
                                               double cruise_sheet);

/// Heading `angle_off_wind` degrees off the wind while keeping the wind on `side`.
[[nodiscard]] Bearing heading_off_wind(const BoatObservation& obs, TackSide side,
                                       double angle_off_wind);

/// Actuation demanded by the procedure at time `now`. Advances the runtime
/// phase once the bear-away run-up has elapsed.
[[nodiscard]] Actuation step_procedure(ProcedureRuntime& rt, const BoatObservation& obs,
                                       double now, const ProcedureParams& params);

/// Lower and upper bound (inclusive) of |relative wind| for a finished tack.
inline constexpr double kCompletionMinAngle = 50.0;
inline constexpr double kCompletionMaxAngle = 120.0;

/// True once the wind is on the other side and 50..120 degrees off the bow.
[[nodiscard]] bool detect_completion(TackSide initial_side, SignedAngle current_rel_wind);

}  // namespace sailhelm
