#pragma once

#include <vector>

namespace sailhelm {

/// Piecewise-linear curve through (x, y) breakpoints with strictly increasing
/// x. Queries outside the breakpoint range clamp to the end values.
class PiecewiseLinear {
 public:
  struct Point {
    double x;
    double y;
    friend bool operator==(const Point&, const Point&) = default;
  };

  PiecewiseLinear() = default;
  /// Throws InvalidInput if empty or x is not strictly increasing.
  explicit PiecewiseLinear(std::vector<Point> points);

  [[nodiscard]] double operator()(double x) const;
  [[nodiscard]] const std::vector<Point>& points() const { return points_; }

  friend bool operator==(const PiecewiseLinear&, const PiecewiseLinear&) = default;

 private:
  std::vector<Point> points_;
};

}  // namespace sailhelm
