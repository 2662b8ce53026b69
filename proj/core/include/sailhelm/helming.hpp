#pragma once

// The helming layer: heading PID and sheet table while cruising, and
// orchestration of tack procedures (ordering, timeout, retries, history)
// when the navigator asks for a change of tack.

#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "sailhelm/geometry.hpp"
#include "sailhelm/procedures.hpp"
#include "sailhelm/random.hpp"
#include "sailhelm/selector.hpp"

namespace sailhelm {

// --- cruise control -------------------------------------------------------

struct PidGains {
  double kp = 1.0;
  double ki = 0.05;
  double kd = 0.2;
  double integral_limit = 10.0;  // bound on the integral term's state (deg*s)

  void validate() const;
  friend bool operator==(const PidGains&, const PidGains&) = default;
};

struct PidState {
  PidGains gains;
  double rudder_max = 30.0;
  double integral = 0.0;
  double previous_error = 0.0;
  bool has_previous = false;

  void reset() {
    integral = 0.0;
    previous_error = 0.0;
    has_previous = false;
  }
};

/// Heading PID on signed_diff(goal, heading); the first call after a reset has
/// no derivative term. Throws InvalidInput if dt <= 0.
[[nodiscard]] double pid_rudder(Bearing goal, const BoatObservation& obs, double dt, PidState& pid);

/// Apparent wind angle (absolute) to sheet setting, linearly interpolated.
class SheetTable {
 public:
  struct Point {
    double angle;  // |apparent wind angle|, degrees
    double sheet;
    friend bool operator==(const Point&, const Point&) = default;
  };

  /// {50: 0.0, 80: 0.3, 135: 0.7, 180: 1.0}
  SheetTable();
  /// Throws InvalidInput unless angles increase from <= 50 to exactly 180 and
  /// sheets are non-decreasing within [0, 1].
  explicit SheetTable(std::vector<Point> points);

  [[nodiscard]] const std::vector<Point>& points() const { return points_; }

  friend bool operator==(const SheetTable&, const SheetTable&) = default;

 private:
  std::vector<Point> points_;
};

/// Throws InvalidInput outside [0, 180].
[[nodiscard]] double sheet_from_table(const SheetTable& table, double rel_wind_abs);

// --- tack bookkeeping -----------------------------------------------------

enum class AttemptOutcome { Success, Failure };

[[nodiscard]] const char* to_string(AttemptOutcome outcome);

struct TackAttemptRecord {
  int command_index = 0;
  ProcedureId procedure = ProcedureId::BasicTack;
  double t_start = 0.0;
  double t_end = 0.0;
  AttemptOutcome outcome = AttemptOutcome::Success;
  double elapsed = 0.0;         // wall time the attempt ran
  double recorded_value = 0.0;  // what went into the history
  std::vector<ProcedureId> order_snapshot;

  friend bool operator==(const TackAttemptRecord&, const TackAttemptRecord&) = default;
};

/// Attempt lifecycle shared by the closed-loop helm and scripted replays:
/// one ordering per command, one record and one history entry per attempt.
class TackBook {
 public:
  explicit TackBook(SelectorState selector) : selector_(std::move(selector)) {}

  /// Orders the list and starts the first attempt at `now`.
  const Ordering& begin_command(double now, UniformSource& rng);

  [[nodiscard]] bool in_command() const { return active_; }
  [[nodiscard]] ProcedureId active_procedure() const { return selector_.current_procedure(); }
  [[nodiscard]] double attempt_start() const { return attempt_start_; }
  [[nodiscard]] const Ordering& last_ordering() const { return ordering_; }

  /// Records now - attempt_start as a success and closes the command.
  void succeed(double now);
  /// Same, with the duration supplied by the caller.
  void succeed(double now, double elapsed);
  /// Records a failure and starts the next attempt at `now`.
  ProcedureId fail_and_advance(double now);
  /// Drops the running attempt without recording anything.
  void abandon();

  [[nodiscard]] const SelectorState& selector() const { return selector_; }
  [[nodiscard]] SelectorState& selector() { return selector_; }
  [[nodiscard]] const std::vector<TackAttemptRecord>& log() const { return log_; }
  [[nodiscard]] int commands_issued() const { return commands_; }

 private:
  void require_active() const;

  SelectorState selector_;
  Ordering ordering_;
  std::vector<TackAttemptRecord> log_;
  int commands_ = 0;
  bool active_ = false;
  double attempt_start_ = 0.0;
};

// --- helm -----------------------------------------------------------------

struct HoldHeading {
  Bearing goal;
};
struct SwitchTack {};

/// The navigator holds SwitchTack until the helm reports completion.
using HelmCommand = std::variant<HoldHeading, SwitchTack>;

struct HelmConfig {
  SelectorConfig selector;
  ProcedureParams procedures;
  PidGains pid;
  SheetTable sheet_table;

  void validate() const;
};

enum class HelmMode { Cruise, Tacking };

[[nodiscard]] const char* to_string(HelmMode mode);

struct HelmStepResult {
  Actuation actuation;
  bool tack_completed = false;
};

class Helm {
 public:
  /// `bear_away_gain` is taken from the PID's proportional gain.
  explicit Helm(HelmConfig config);

  /// One control step.
  ///
  /// Cruise + HoldHeading steers by PID and trims by table. A rising edge of
  /// SwitchTack orders the procedure list and starts the first entry. While
  /// tacking, an attempt that exceeds the timeout is recorded as a failure
  /// and the next entry starts in the same step; an attempt that reaches the
  /// other tack within the timeout is recorded as a success. Dropping
  /// SwitchTack mid-manoeuvre abandons the attempt unrecorded.
  HelmStepResult step(const HelmCommand& cmd, const BoatObservation& obs, double now, double dt,
                      UniformSource& rng);

  /// While set, no procedure is started and a running one is abandoned.
  void set_manual_override(bool on);
  [[nodiscard]] bool manual_override() const { return manual_override_; }

  [[nodiscard]] HelmMode mode() const { return mode_; }
  [[nodiscard]] std::optional<ProcedureId> active_procedure() const;
  [[nodiscard]] const std::optional<ProcedureRuntime>& runtime() const { return runtime_; }
  [[nodiscard]] const HelmConfig& config() const { return config_; }
  [[nodiscard]] const PidState& pid() const { return pid_; }
  [[nodiscard]] const TackBook& book() const { return book_; }
  [[nodiscard]] TackBook& book() { return book_; }
  [[nodiscard]] const std::vector<TackAttemptRecord>& attempt_log() const { return book_.log(); }

 private:
  Actuation cruise(const BoatObservation& obs, double dt);
  void start_attempt(const BoatObservation& obs, double now);
  TackSide side_of(const BoatObservation& obs) const;

  HelmConfig config_;
  TackBook book_;
  PidState pid_;
  HelmMode mode_ = HelmMode::Cruise;
  std::optional<ProcedureRuntime> runtime_;
  std::optional<Bearing> goal_;
  TackSide last_side_ = TackSide::Starboard;
  bool switch_held_ = false;
  bool manual_override_ = false;
};

}  // namespace sailhelm
