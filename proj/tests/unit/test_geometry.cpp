#include <cmath>
#include <limits>
#include <random>

#include <doctest.h>

#include "sailhelm/errors.hpp"
#include "sailhelm/geometry.hpp"

using namespace sailhelm;

namespace {

// Apparent wind worked out in (east, north) components, independent of the library.
struct Oracle {
  double speed;
  double from;
};

Oracle apparent_oracle(double wind_speed, double wind_from_deg, double vx, double vy) {
  const double r = wind_from_deg * M_PI / 180.0;
  // Air moves toward from + 180.
  const double ax = -wind_speed * std::sin(r) - vx;
  const double ay = -wind_speed * std::cos(r) - vy;
  double from = std::atan2(-ax, -ay) * 180.0 / M_PI;
  if (from < 0) from += 360.0;
  return {std::hypot(ax, ay), from};
}

double angular_gap(double a, double b) {
  const double d = std::fmod(std::fabs(a - b), 360.0);
  return std::min(d, 360.0 - d);
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("normalize_bearing examples") {
    CHECK(normalize_bearing(370).degrees() == doctest::Approx(10));
    CHECK(normalize_bearing(-90).degrees() == doctest::Approx(270));
    CHECK(normalize_bearing(0).degrees() == 0.0);
    CHECK(normalize_bearing(360).degrees() == 0.0);
    CHECK(normalize_bearing(-1e-300).degrees() < 360.0);
  }

  TEST_CASE("non-finite angles are rejected") {
    CHECK_THROWS_AS((void)normalize_bearing(std::nan("")), InvalidInput);
    CHECK_THROWS_AS(Bearing(std::numeric_limits<double>::infinity()), InvalidInput);
    CHECK_THROWS_AS(SignedAngle(std::nan("")), InvalidInput);
  }

  TEST_CASE("signed_diff examples") {
    CHECK(signed_diff(Bearing(10), Bearing(350)).degrees() == doctest::Approx(20));
    CHECK(signed_diff(Bearing(350), Bearing(10)).degrees() == doctest::Approx(-20));
    CHECK(signed_diff(Bearing(180), Bearing(0)).degrees() == 180.0);
    CHECK(signed_diff(Bearing(0), Bearing(180)).degrees() == 180.0);
  }

  TEST_CASE("relative_wind examples") {
    CHECK(relative_wind(Bearing(0), WindVector(Bearing(45), 3)).degrees() == doctest::Approx(45));
    CHECK(relative_wind(Bearing(0), WindVector(Bearing(315), 3)).degrees() == doctest::Approx(-45));
    CHECK(relative_wind(Bearing(90), WindVector(Bearing(270), 3)).degrees() == 180.0);
  }

  TEST_CASE("tack_side examples") {
    CHECK(tack_side(SignedAngle(90)) == TackSide::Starboard);
    CHECK(tack_side(SignedAngle(-50)) == TackSide::Port);
    CHECK_THROWS_AS((void)tack_side(SignedAngle(0)), UsageError);
    CHECK(opposite(TackSide::Port) == TackSide::Starboard);
    CHECK(side_sign(TackSide::Port) == -1.0);
  }

  TEST_CASE("apparent_wind examples") {
    const WindVector w(Bearing(0), 5);
    const WindVector still = apparent_wind(w, {0, 0});
    CHECK(still.speed == 5.0);
    CHECK(still.from_direction.degrees() == 0.0);

    const WindVector north = apparent_wind(w, {0, 5});
    CHECK(north.speed == doctest::Approx(10));
    CHECK(angular_gap(north.from_direction.degrees(), 0) < 1e-9);

    const WindVector east = apparent_wind(w, {5, 0});
    CHECK(east.speed == doctest::Approx(std::sqrt(50.0)));
    CHECK(east.from_direction.degrees() == doctest::Approx(45));
  }

  TEST_CASE("wind speed must be non-negative") {
    CHECK_THROWS_AS(WindVector(Bearing(0), -1), InvalidInput);
  }

  TEST_CASE("properties over random angles") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> deg(-720, 720);
    std::uniform_real_distribution<double> spd(0, 8);
    for (int i = 0; i < 20000; ++i) {
      const Bearing a = normalize_bearing(deg(gen));
      const Bearing b = normalize_bearing(deg(gen));
      CHECK_UNARY(a.degrees() >= 0.0);
      CHECK_UNARY(a.degrees() < 360.0);

      const SignedAngle d = signed_diff(a, b);
      CHECK_UNARY(d.degrees() > -180.0);
      CHECK_UNARY(d.degrees() <= 180.0);
      CHECK(angular_gap(normalize_bearing(b.degrees() + d.degrees()).degrees(), a.degrees()) < 1e-9);
      if (d.degrees() != 180.0) {
        CHECK(signed_diff(b, a).degrees() == doctest::Approx(-d.degrees()).epsilon(1e-12));
      }

      const double ws = spd(gen);
      const double vx = spd(gen) - 4;
      const double vy = spd(gen) - 4;
      const WindVector app = apparent_wind(WindVector(a, ws), {vx, vy});
      const Oracle o = apparent_oracle(ws, a.degrees(), vx, vy);
      CHECK(app.speed == doctest::Approx(o.speed).epsilon(1e-9));
      if (o.speed > 1e-6) CHECK(angular_gap(app.from_direction.degrees(), o.from) < 1e-6);

      const WindVector same = apparent_wind(WindVector(a, ws), {0, 0});
      CHECK(angular_gap(same.from_direction.degrees(), a.degrees()) < 1e-9);
      CHECK(same.speed == ws);
    }
  }

  TEST_CASE("tack side flips only when the wind crosses the bow or stern axis") {
    const WindVector wind(Bearing(0), 3);
    TackSide prev = tack_side(relative_wind(Bearing(0.5), wind));
    for (double h = 1.0; h < 360.0; h += 0.5) {
      const SignedAngle rel = relative_wind(Bearing(h), wind);
      if (rel.degrees() == 0.0) continue;
      const TackSide now = tack_side(rel);
      if (now != prev) CHECK((h == doctest::Approx(180.5) || h == doctest::Approx(180.0)));
      prev = now;
    }
  }
}
