#include "sailhelm/helming.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sailhelm/errors.hpp"

namespace sailhelm {

// --- PID ------------------------------------------------------------------

void PidGains::validate() const {
  if (!(kp >= 0.0 && ki >= 0.0 && kd >= 0.0)) throw InvalidInput("PID gains must be >= 0");
  if (!(integral_limit >= 0.0)) throw InvalidInput("integral_limit must be >= 0");
}

double pid_rudder(Bearing goal, const BoatObservation& obs, double dt, PidState& pid) {
  if (!(dt > 0.0)) throw InvalidInput("dt must be > 0");
  const double error = signed_diff(goal, obs.heading).degrees();
  const auto& g = pid.gains;

  pid.integral = std::clamp(pid.integral + error * dt, -g.integral_limit, g.integral_limit);
  const double derivative = pid.has_previous ? (error - pid.previous_error) / dt : 0.0;
  pid.previous_error = error;
  pid.has_previous = true;

  const double out = g.kp * error + g.ki * pid.integral + g.kd * derivative;
  return std::clamp(out, -pid.rudder_max, pid.rudder_max);
}

// --- sheet table ----------------------------------------------------------

SheetTable::SheetTable() : SheetTable({{50.0, 0.0}, {80.0, 0.3}, {135.0, 0.7}, {180.0, 1.0}}) {}

SheetTable::SheetTable(std::vector<Point> points) : points_(std::move(points)) {
  if (points_.empty()) throw InvalidInput("sheet table needs at least one breakpoint");
  if (points_.front().angle > 50.0) throw InvalidInput("first sheet breakpoint must be <= 50 deg");
  if (points_.back().angle != 180.0) throw InvalidInput("last sheet breakpoint must be at 180 deg");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& p = points_[i];
    if (!(p.angle >= 0.0) || !(p.sheet >= 0.0 && p.sheet <= 1.0)) {
      throw InvalidInput("sheet breakpoints need angle >= 0 and sheet in [0, 1]");
    }
    if (i > 0 && !(p.angle > points_[i - 1].angle)) {
      throw InvalidInput("sheet breakpoint angles must increase");
    }
    if (i > 0 && p.sheet < points_[i - 1].sheet) {
      throw InvalidInput("sheet values must be non-decreasing in angle");
    }
  }
}

double sheet_from_table(const SheetTable& table, double rel_wind_abs) {
  if (!(rel_wind_abs >= 0.0 && rel_wind_abs <= 180.0)) {
    throw InvalidInput("sheet table query must be within [0, 180], got " +
                       std::to_string(rel_wind_abs));
  }
  const auto& pts = table.points();
  if (rel_wind_abs <= pts.front().angle) return pts.front().sheet;
  const auto hi = std::lower_bound(pts.begin(), pts.end(), rel_wind_abs,
                                   [](const SheetTable::Point& p, double a) { return p.angle < a; });
  const auto lo = hi - 1;
  const double t = (rel_wind_abs - lo->angle) / (hi->angle - lo->angle);
  return lo->sheet + t * (hi->sheet - lo->sheet);
}

// --- TackBook -------------------------------------------------------------

const char* to_string(AttemptOutcome outcome) {
  return outcome == AttemptOutcome::Success ? "Success" : "Failure";
}

const Ordering& TackBook::begin_command(double now, UniformSource& rng) {
  if (active_) throw UsageError("a tack command is already running");
  ordering_ = selector_.begin_tack_command(rng);
  ++commands_;
  active_ = true;
  attempt_start_ = now;
  return ordering_;
}

void TackBook::require_active() const {
  if (!active_) throw UsageError("no tack command is running");
}

void TackBook::succeed(double now) { succeed(now, now - attempt_start_); }

void TackBook::succeed(double now, double elapsed) {
  require_active();
  const ProcedureId id = selector_.current_procedure();
  selector_.record_success(id, elapsed);
  log_.push_back({commands_ - 1, id, attempt_start_, now, AttemptOutcome::Success, elapsed,
                  selector_.entry(id).time_list.values().back(), selector_.current_order()});
  active_ = false;
}

ProcedureId TackBook::fail_and_advance(double now) {
  require_active();
  const ProcedureId id = selector_.current_procedure();
  const ProcedureId next = selector_.record_failure_and_advance(id);
  log_.push_back({commands_ - 1, id, attempt_start_, now, AttemptOutcome::Failure,
                  now - attempt_start_, kFailurePenaltyFactor * selector_.config().timeout,
                  selector_.current_order()});
  attempt_start_ = now;
  return next;
}

void TackBook::abandon() { active_ = false; }

// --- Helm -----------------------------------------------------------------

void HelmConfig::validate() const {
  selector.validate();
  procedures.validate();
  pid.validate();
}

const char* to_string(HelmMode mode) { return mode == HelmMode::Cruise ? "Cruise" : "Tacking"; }

namespace {

HelmConfig with_bear_away_gain(HelmConfig config) {
  config.validate();
  config.procedures.bear_away_gain = config.pid.kp > 0.0 ? config.pid.kp : 1.0;
  return config;
}

}  // namespace

Helm::Helm(HelmConfig config)
    : config_(with_bear_away_gain(std::move(config))), book_(SelectorState(config_.selector)) {
  pid_.gains = config_.pid;
  pid_.rudder_max = config_.procedures.rudder_max;
}

void Helm::set_manual_override(bool on) {
  manual_override_ = on;
  if (on && mode_ == HelmMode::Tacking) {
    book_.abandon();
    runtime_.reset();
    mode_ = HelmMode::Cruise;
    pid_.reset();
  }
}

std::optional<ProcedureId> Helm::active_procedure() const {
  if (mode_ != HelmMode::Tacking) return std::nullopt;
  return book_.active_procedure();
}

TackSide Helm::side_of(const BoatObservation& obs) const {
  // Exactly head-to-wind has no side; keep the last one seen.
  if (obs.apparent_wind_angle.degrees() == 0.0) return last_side_;
  return tack_side(obs.apparent_wind_angle);
}

Actuation Helm::cruise(const BoatObservation& obs, double dt) {
  const double sheet = sheet_from_table(config_.sheet_table, obs.apparent_wind_angle.abs());
  if (!goal_) return {0.0, sheet};
  return {pid_rudder(*goal_, obs, dt, pid_), sheet};
}

void Helm::start_attempt(const BoatObservation& obs, double now) {
  const double sheet = sheet_from_table(config_.sheet_table, obs.apparent_wind_angle.abs());
  runtime_ = start_procedure(book_.active_procedure(), now, side_of(obs), sheet);
}

HelmStepResult Helm::step(const HelmCommand& cmd, const BoatObservation& obs, double now, double dt,
                          UniformSource& rng) {
  const bool switch_requested = std::holds_alternative<SwitchTack>(cmd);
  if (const auto* hold = std::get_if<HoldHeading>(&cmd)) goal_ = hold->goal;

  HelmStepResult result;
  if (manual_override_) {
    // The edge detector is frozen while overridden, so a request still held
    // when autonomy resumes starts a tack.
    result.actuation = cruise(obs, dt);
    if (obs.apparent_wind_angle.degrees() != 0.0) last_side_ = side_of(obs);
    return result;
  }
  const bool rising_edge = switch_requested && !switch_held_;
  switch_held_ = switch_requested;

  if (mode_ == HelmMode::Tacking && !switch_requested) {
    book_.abandon();
    runtime_.reset();
    mode_ = HelmMode::Cruise;
    pid_.reset();
  }

  if (mode_ == HelmMode::Cruise) {
    if (rising_edge) {
      book_.begin_command(now, rng);
      start_attempt(obs, now);
      mode_ = HelmMode::Tacking;
      result.actuation = step_procedure(*runtime_, obs, now, config_.procedures);
    } else {
      result.actuation = cruise(obs, dt);
    }
    if (obs.apparent_wind_angle.degrees() != 0.0) last_side_ = side_of(obs);
    return result;
  }

  const double elapsed = now - book_.attempt_start();
  if (elapsed > config_.selector.timeout + kTimeEpsilon) {
    book_.fail_and_advance(now);
    start_attempt(obs, now);
    result.actuation = step_procedure(*runtime_, obs, now, config_.procedures);
  } else if (detect_completion(runtime_->initial_side, obs.apparent_wind_angle)) {
    book_.succeed(now);
    runtime_.reset();
    mode_ = HelmMode::Cruise;
    pid_.reset();
    // The old goal belongs to the previous tack; hold the rudder neutral until
    // the navigator issues a heading for the new one.
    goal_.reset();
    result.actuation = cruise(obs, dt);
    result.tack_completed = true;
  } else {
    result.actuation = step_procedure(*runtime_, obs, now, config_.procedures);
  }
  if (obs.apparent_wind_angle.degrees() != 0.0) last_side_ = side_of(obs);
  return result;
}

}  // namespace sailhelm
