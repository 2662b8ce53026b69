#include "sailhelm/geometry.hpp"

#include <cmath>
#include <string>

#include "sailhelm/errors.hpp"

namespace sailhelm {

namespace {

double wrap360(double raw) {
  if (!std::isfinite(raw)) {
    throw InvalidInput("angle must be finite, got " + std::to_string(raw));
  }
  double d = std::fmod(raw, 360.0);
  if (d < 0.0) d += 360.0;
  // fmod of a tiny negative value plus 360 can round up to exactly 360.
  if (d >= 360.0) d = 0.0;
  return d;
}

}  // namespace

Bearing::Bearing(double raw) : degrees_(wrap360(raw)) {}

SignedAngle::SignedAngle(double raw) {
  double d = wrap360(raw);
  degrees_ = d > 180.0 ? d - 360.0 : d;
}

double SignedAngle::abs() const { return std::fabs(degrees_); }

const char* to_string(TackSide side) {
  return side == TackSide::Port ? "Port" : "Starboard";
}

double norm(Vec2 v) { return std::hypot(v.x, v.y); }

Vec2 unit_vector(Bearing b) {
  const double r = deg_to_rad(b.degrees());
  return {std::sin(r), std::cos(r)};
}

Bearing bearing_between(Vec2 from, Vec2 to) {
  const Vec2 d = to - from;
  if (d.x == 0.0 && d.y == 0.0) return Bearing{};
  return Bearing(rad_to_deg(std::atan2(d.x, d.y)));
}

WindVector::WindVector(Bearing from, double speed_mps) : from_direction(from), speed(speed_mps) {
  if (!std::isfinite(speed_mps) || speed_mps < 0.0) {
    throw InvalidInput("wind speed must be finite and >= 0");
  }
}

Vec2 WindVector::flow() const { return -speed * unit_vector(from_direction); }

Bearing normalize_bearing(double raw) { return Bearing(raw); }

SignedAngle signed_diff(Bearing a, Bearing b) { return SignedAngle(a.degrees() - b.degrees()); }

SignedAngle relative_wind(Bearing heading, const WindVector& wind) {
  return signed_diff(wind.from_direction, heading);
}

TackSide tack_side(SignedAngle rel) {
  if (rel.degrees() == 0.0) throw UsageError("tack side undefined when head-to-wind");
  return rel.degrees() > 0.0 ? TackSide::Starboard : TackSide::Port;
}

WindVector apparent_wind(const WindVector& true_wind, Vec2 boat_velocity) {
  if (boat_velocity.x == 0.0 && boat_velocity.y == 0.0) return true_wind;
  const Vec2 air = true_wind.flow() - boat_velocity;
  const double speed = norm(air);
  if (speed == 0.0) return WindVector(true_wind.from_direction, 0.0);
  // The from-direction points against the flow.
  return WindVector(Bearing(rad_to_deg(std::atan2(-air.x, -air.y))), speed);
}

}  // namespace sailhelm
