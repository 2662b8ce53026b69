#include "sailhelm/procedures.hpp"

#include <algorithm>
#include <cmath>

#include "sailhelm/errors.hpp"

namespace sailhelm {

void ProcedureParams::validate() const {
  if (!(rudder_max > 0.0 && rudder_max <= 90.0)) throw InvalidInput("rudder_max must be in (0, 90]");
  if (!(sheet_out_delta >= 0.0 && sheet_out_delta <= 1.0)) {
    throw InvalidInput("sheet_out_delta must be in [0, 1]");
  }
  if (!(bear_away_duration >= 0.0)) throw InvalidInput("bear_away_duration must be >= 0");
  if (!(bear_away_angle > 0.0 && bear_away_angle < 180.0)) {
    throw InvalidInput("bear_away_angle must be in (0, 180)");
  }
  if (!(bear_away_gain > 0.0)) throw InvalidInput("bear_away_gain must be > 0");
}

ProcedureRuntime start_procedure(ProcedureId kind, double now, TackSide side, double cruise_sheet) {
  ProcedureRuntime rt;
  rt.kind = kind;
  rt.start_time = now;
  rt.initial_side = side;
  rt.cruise_sheet = std::clamp(cruise_sheet, 0.0, 1.0);
  rt.phase = kind == ProcedureId::TackIncreaseAngleToWind ? ProcedurePhase::BearAway
                                                          : ProcedurePhase::Turning;
  return rt;
}

Bearing heading_off_wind(const BoatObservation& obs, TackSide side, double angle_off_wind) {
  const double wind_from = obs.heading.degrees() + obs.apparent_wind_angle.degrees();
  // Wind on the starboard side means the bow points to port of the wind.
  return Bearing(wind_from - side_sign(side) * angle_off_wind);
}

Actuation step_procedure(ProcedureRuntime& rt, const BoatObservation& obs, double now,
                         const ProcedureParams& params) {
  // Full rudder toward the wind swings the bow through it.
  const double tack_rudder = side_sign(rt.initial_side) * params.rudder_max;

  switch (rt.kind) {
    case ProcedureId::BasicTack:
      return {tack_rudder, rt.cruise_sheet};
    case ProcedureId::BasicJibe:
      return {-tack_rudder, 1.0};
    case ProcedureId::TackSheetOut:
      return {tack_rudder, std::min(1.0, rt.cruise_sheet + params.sheet_out_delta)};
    case ProcedureId::TackIncreaseAngleToWind:
      if (rt.phase == ProcedurePhase::BearAway) {
        if (now - rt.start_time < params.bear_away_duration) {
          const Bearing goal = heading_off_wind(obs, rt.initial_side, params.bear_away_angle);
          const double error = signed_diff(goal, obs.heading).degrees();
          const double rudder =
              std::clamp(params.bear_away_gain * error, -params.rudder_max, params.rudder_max);
          return {rudder, rt.cruise_sheet};
        }
        rt.phase = ProcedurePhase::Turning;
      }
      return {tack_rudder, rt.cruise_sheet};
  }
  throw UsageError("unknown procedure");
}

bool detect_completion(TackSide initial_side, SignedAngle current_rel_wind) {
  if (current_rel_wind.degrees() == 0.0) return false;
  const double a = current_rel_wind.abs();
  return tack_side(current_rel_wind) != initial_side && a >= kCompletionMinAngle &&
         a <= kCompletionMaxAngle;
}

}  // namespace sailhelm
