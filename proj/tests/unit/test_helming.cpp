#include <cmath>

#include <doctest.h>

#include "sailhelm/errors.hpp"
#include "sailhelm/helming.hpp"
#include "sailhelm/simulator.hpp"

using namespace sailhelm;

namespace {

constexpr auto BT = ProcedureId::BasicTack;
constexpr auto TSO = ProcedureId::TackSheetOut;
constexpr auto BJ = ProcedureId::BasicJibe;

BoatObservation obs_rel(double rel, double heading = 0.0, double speed = 0.75) {
  BoatObservation o;
  o.heading = Bearing(heading);
  o.apparent_wind_angle = SignedAngle(rel);
  o.apparent_wind_speed = 2.0;
  o.speed = speed;
  return o;
}

HelmConfig field_helm() {
  HelmConfig c;
  c.selector = {15.0, 0.0, {BT, TSO, BJ}};
  return c;
}

PidState p_only(double kp) {
  PidState s;
  s.gains = {kp, 0.0, 0.0, 10.0};
  return s;
}

constexpr double kDt = 0.1;

}  // namespace

TEST_SUITE("helming") {
  TEST_CASE("pid_rudder examples") {
    PidState zero;
    CHECK(pid_rudder(Bearing(0), obs_rel(-50, 0), kDt, zero) == 0.0);

    PidState p = p_only(1.0);
    CHECK(pid_rudder(Bearing(10), obs_rel(-50, 0), kDt, p) == doctest::Approx(10));
    p.reset();
    CHECK(pid_rudder(Bearing(100), obs_rel(-50, 0), kDt, p) == 30.0);
    p.reset();
    CHECK(pid_rudder(Bearing(260), obs_rel(-50, 0), kDt, p) == -30.0);
    CHECK_THROWS_AS((void)pid_rudder(Bearing(0), obs_rel(-50), 0.0, p), InvalidInput);
  }

  TEST_CASE("pid integral is clamped and derivative acts on the error") {
    PidState s;
    s.gains = {0.0, 1.0, 0.0, 10.0};
    for (int i = 0; i < 1000; ++i) (void)pid_rudder(Bearing(20), obs_rel(-50, 0), kDt, s);
    CHECK(std::fabs(s.integral) <= 10.0);
    CHECK(pid_rudder(Bearing(20), obs_rel(-50, 0), kDt, s) == doctest::Approx(10.0));

    PidState d;
    d.gains = {0.0, 0.0, 1.0, 10.0};
    CHECK(pid_rudder(Bearing(10), obs_rel(-50, 0), kDt, d) == 0.0);  // no derivative on the first call
    CHECK(pid_rudder(Bearing(10), obs_rel(-50, 1), kDt, d) == doctest::Approx(-10.0));
  }

  TEST_CASE("pid is a pure function of its inputs after a reset") {
    PidState a;
    PidState b;
    for (int i = 0; i < 20; ++i) {
      const auto o = obs_rel(-50, 5.0 * i);
      CHECK(pid_rudder(Bearing(45), o, kDt, a) == pid_rudder(Bearing(45), o, kDt, b));
    }
  }

  TEST_CASE("sheet table examples") {
    const SheetTable t;
    CHECK(sheet_from_table(t, 50) == 0.0);
    CHECK(sheet_from_table(t, 180) == 1.0);
    CHECK(sheet_from_table(t, 107.5) == doctest::Approx(0.5));
    CHECK(sheet_from_table(t, 10) == 0.0);
    CHECK_THROWS_AS((void)sheet_from_table(t, 181), InvalidInput);
    CHECK_THROWS_AS((void)sheet_from_table(t, -1), InvalidInput);
  }

  TEST_CASE("sheet table validation") {
    CHECK_THROWS_AS(SheetTable({{60, 0.0}, {180, 1.0}}), InvalidInput);
    CHECK_THROWS_AS(SheetTable({{50, 0.0}, {170, 1.0}}), InvalidInput);
    CHECK_THROWS_AS(SheetTable({{50, 0.5}, {180, 0.2}}), InvalidInput);
    CHECK_THROWS_AS(SheetTable({{50, 0.0}, {50, 0.2}, {180, 1.0}}), InvalidInput);
    CHECK_NOTHROW(SheetTable({{0, 0.0}, {180, 1.0}}));
  }

  TEST_CASE("a tack that reaches the other side in 7 s is logged as a success") {
    Helm helm(field_helm());
    Rng rng(1);
    double t = 0.0;
    (void)helm.step(HoldHeading{Bearing(310)}, obs_rel(50, 310), t, kDt, rng);
    for (int k = 1; k <= 70; ++k) {
      t = k * kDt;
      const auto r = helm.step(SwitchTack{}, obs_rel(k < 70 ? 50 - k : -60), t, kDt, rng);
      CHECK(r.tack_completed == (k == 70));
    }
    REQUIRE(helm.attempt_log().size() == 1);
    const auto& rec = helm.attempt_log().front();
    CHECK(rec.procedure == BT);
    CHECK(rec.outcome == AttemptOutcome::Success);
    CHECK(rec.elapsed == doctest::Approx(6.9));
    CHECK(helm.mode() == HelmMode::Cruise);
  }

  TEST_CASE("timeout records a failure and starts the next procedure in the same step") {
    Helm helm(field_helm());
    Rng rng(1);
    (void)helm.step(HoldHeading{Bearing(310)}, obs_rel(50, 310), 0.0, kDt, rng);
    double t = 0.0;
    int k = 1;
    for (; helm.attempt_log().empty(); ++k) {
      t = k * kDt;
      (void)helm.step(SwitchTack{}, obs_rel(20), t, kDt, rng);
      REQUIRE(k < 1000);
    }
    const auto& rec = helm.attempt_log().front();
    CHECK(rec.outcome == AttemptOutcome::Failure);
    CHECK(rec.procedure == BT);
    CHECK(rec.recorded_value == 22.5);
    CHECK(rec.elapsed > 15.0);
    CHECK(rec.elapsed <= 15.0 + kDt + 1e-9);
    CHECK(helm.mode() == HelmMode::Tacking);
    CHECK(helm.active_procedure() == TSO);
    CHECK(helm.book().attempt_start() == doctest::Approx(t));
  }

  TEST_CASE("no SwitchTack, no procedure") {
    Helm helm(field_helm());
    Rng rng(1);
    for (int k = 0; k < 2000; ++k) {
      const auto r = helm.step(HoldHeading{Bearing(180)}, obs_rel(175, 180), k * kDt, kDt, rng);
      CHECK(helm.mode() == HelmMode::Cruise);
      CHECK_FALSE(r.tack_completed);
    }
    CHECK(helm.attempt_log().empty());
    CHECK(helm.book().commands_issued() == 0);
  }

  TEST_CASE("a held request starts one command; dropping it abandons the attempt") {
    Helm helm(field_helm());
    Rng rng(1);
    (void)helm.step(SwitchTack{}, obs_rel(40), 0.0, kDt, rng);
    (void)helm.step(SwitchTack{}, obs_rel(30), kDt, kDt, rng);
    CHECK(helm.book().commands_issued() == 1);
    (void)helm.step(HoldHeading{Bearing(0)}, obs_rel(30), 2 * kDt, kDt, rng);
    CHECK(helm.mode() == HelmMode::Cruise);
    CHECK(helm.attempt_log().empty());
    CHECK(helm.book().selector().entry(BT).time_list.empty());
  }

  TEST_CASE("manual override suppresses and discards attempts") {
    Helm helm(field_helm());
    Rng rng(1);
    helm.set_manual_override(true);
    for (int k = 0; k < 400; ++k) (void)helm.step(SwitchTack{}, obs_rel(20), k * kDt, kDt, rng);
    CHECK(helm.mode() == HelmMode::Cruise);
    CHECK(helm.attempt_log().empty());
    for (ProcedureId id : {BT, TSO, BJ}) CHECK(helm.book().selector().entry(id).time_list.empty());

    // Override arriving mid-manoeuvre drops the running attempt without a record.
    helm.set_manual_override(false);
    (void)helm.step(SwitchTack{}, obs_rel(20), 40.0, kDt, rng);
    CHECK(helm.mode() == HelmMode::Tacking);
    helm.set_manual_override(true);
    CHECK(helm.mode() == HelmMode::Cruise);
    CHECK(helm.attempt_log().empty());
  }

  TEST_CASE("attempt log invariants over a long scripted session") {
    HelmConfig cfg = field_helm();
    cfg.selector.exploration_coefficient = 0.3;
    Helm helm(cfg);
    Rng rng(77);
    Rng world(78);
    double t = 0.0;
    for (int command = 0; command < 40; ++command) {
      (void)helm.step(HoldHeading{Bearing(310)}, obs_rel(50), t, kDt, rng);
      t += kDt;
      // Each attempt finishes after a random time; some never do.
      double finish = t + 40.0 * world.uniform01();
      for (int guard = 0; guard < 5000; ++guard) {
        const bool done = t >= finish;
        const auto r = helm.step(SwitchTack{}, obs_rel(done ? -60 : 30), t, kDt, rng);
        if (r.tack_completed) break;
        if (!helm.attempt_log().empty() && helm.attempt_log().back().t_end == t &&
            helm.attempt_log().back().outcome == AttemptOutcome::Failure) {
          finish = t + 40.0 * world.uniform01();
        }
        t += kDt;
      }
    }
    int index = -1;
    bool open = false;
    for (const auto& rec : helm.attempt_log()) {
      if (rec.command_index != index) {
        CHECK_FALSE(open);
        index = rec.command_index;
      }
      open = rec.outcome == AttemptOutcome::Failure;
      if (rec.outcome == AttemptOutcome::Success) {
        CHECK(rec.elapsed <= cfg.selector.timeout + kDt + 1e-9);
        CHECK(rec.recorded_value <= cfg.selector.timeout);
      } else {
        CHECK(rec.recorded_value == 1.5 * cfg.selector.timeout);
      }
    }
    CHECK(index == 39);
  }

  TEST_CASE("TackBook bookkeeping") {
    TackBook book(SelectorState({15.0, 0.0, {BT, TSO, BJ}}));
    ScriptedUniform none{0.5, 0.5, 0.5};
    CHECK_THROWS_AS(book.succeed(1.0), UsageError);
    book.begin_command(0.0, none);
    ScriptedUniform spare{0.5, 0.5, 0.5};
    CHECK_THROWS_AS(book.begin_command(0.0, spare), UsageError);
    CHECK(book.fail_and_advance(15.1) == TSO);
    book.succeed(20.1);
    REQUIRE(book.log().size() == 2);
    CHECK(book.log()[1].elapsed == doctest::Approx(5.0));
    CHECK(book.log()[1].order_snapshot == std::vector{BT, TSO, BJ});
    CHECK_FALSE(book.in_command());
  }

  TEST_CASE("cruise control holds a heading within 5 degrees in default conditions") {
    const SimConfig sim;
    EnvState env;  // 2.06 m/s from North, gusts on
    Rng rng(3);
    randomize_env(env, rng);
    BoatPhysState boat;
    boat.heading = Bearing(300);
    boat.speed = steady_speed(boat.heading, env, 0.0, sim);
    Helm helm(HelmConfig{});
    const Bearing goal(310);
    double worst = 0.0;
    for (int k = 0; k < 1200; ++k) {
      const double t = k * sim.dt;
      const auto obs = observe(boat, env, sim, rng);
      const auto r = helm.step(HoldHeading{goal}, obs, t, sim.dt, rng);
      boat = step_boat(boat, r.actuation, env, sim.dt, sim);
      env = step_env(env, sim.dt, rng);
      if (t > 20.0) worst = std::max(worst, std::fabs(signed_diff(goal, boat.heading).degrees()));
    }
    CHECK(worst <= 5.0);
  }
}
