#pragma once

// Angle arithmetic and wind frames.
//
// Conventions used everywhere in the library:
//   * bearings are compass degrees, clockwise from North, in [0, 360);
//   * signed angles are degrees in (-180, 180], ties resolve to +180;
//   * the local plane is x = East, y = North, metres;
//   * relative wind is positive when the wind arrives over the starboard side.

namespace sailhelm {

class Bearing {
 public:
  constexpr Bearing() = default;
  /// Throws InvalidInput if `raw` is not finite.
  explicit Bearing(double raw);

  [[nodiscard]] constexpr double degrees() const { return degrees_; }

  friend constexpr bool operator==(Bearing, Bearing) = default;

 private:
  double degrees_ = 0.0;
};

class SignedAngle {
 public:
  constexpr SignedAngle() = default;
  /// Wraps `raw` into (-180, 180]. Throws InvalidInput if not finite.
  explicit SignedAngle(double raw);

  [[nodiscard]] constexpr double degrees() const { return degrees_; }
  [[nodiscard]] double abs() const;

  friend constexpr bool operator==(SignedAngle, SignedAngle) = default;

 private:
  double degrees_ = 0.0;
};

enum class TackSide { Port, Starboard };

[[nodiscard]] constexpr TackSide opposite(TackSide side) {
  return side == TackSide::Port ? TackSide::Starboard : TackSide::Port;
}

/// +1 for Starboard, -1 for Port.
[[nodiscard]] constexpr double side_sign(TackSide side) {
  return side == TackSide::Starboard ? 1.0 : -1.0;
}

[[nodiscard]] const char* to_string(TackSide side);

struct Vec2 {
  double x = 0.0;  // East
  double y = 0.0;  // North

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(double k, Vec2 v) { return {k * v.x, k * v.y}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

[[nodiscard]] constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
[[nodiscard]] double norm(Vec2 v);

/// Unit vector pointing along a compass bearing.
[[nodiscard]] Vec2 unit_vector(Bearing b);

/// Compass bearing of the segment from `from` to `to`. Zero-length segments give 0.
[[nodiscard]] Bearing bearing_between(Vec2 from, Vec2 to);

struct WindVector {
  Bearing from_direction;
  double speed = 0.0;  // m/s, >= 0

  WindVector() = default;
  /// Throws InvalidInput on a negative or non-finite speed.
  WindVector(Bearing from, double speed_mps);

  /// Velocity of the air mass in the local plane (points where the wind goes).
  [[nodiscard]] Vec2 flow() const;
};

[[nodiscard]] Bearing normalize_bearing(double raw);

/// Shortest signed rotation taking `b` onto `a`.
[[nodiscard]] SignedAngle signed_diff(Bearing a, Bearing b);

/// Angle of the wind's from-direction relative to the bow.
[[nodiscard]] SignedAngle relative_wind(Bearing heading, const WindVector& wind);

/// Throws UsageError for exactly head-to-wind (0), which has no side.
[[nodiscard]] TackSide tack_side(SignedAngle rel);

/// Wind felt aboard a boat moving with `boat_velocity` through `true_wind`.
[[nodiscard]] WindVector apparent_wind(const WindVector& true_wind, Vec2 boat_velocity);

[[nodiscard]] constexpr double deg_to_rad(double deg) { return deg * 0.017453292519943295; }
[[nodiscard]] constexpr double rad_to_deg(double rad) { return rad * 57.29577951308232; }

}  // namespace sailhelm
