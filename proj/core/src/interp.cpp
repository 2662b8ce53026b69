#include "sailhelm/interp.hpp"

#include <algorithm>
#include <cmath>

#include "sailhelm/errors.hpp"

namespace sailhelm {

PiecewiseLinear::PiecewiseLinear(std::vector<Point> points) : points_(std::move(points)) {
  if (points_.empty()) throw InvalidInput("piecewise-linear curve needs at least one point");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i].x) || !std::isfinite(points_[i].y)) {
      throw InvalidInput("breakpoints must be finite");
    }
    if (i > 0 && !(points_[i].x > points_[i - 1].x)) {
      throw InvalidInput("breakpoint x values must be strictly increasing");
    }
  }
}

double PiecewiseLinear::operator()(double x) const {
  if (points_.empty()) throw UsageError("empty piecewise-linear curve");
  if (x <= points_.front().x) return points_.front().y;
  if (x >= points_.back().x) return points_.back().y;
  const auto hi = std::lower_bound(points_.begin(), points_.end(), x,
                                   [](const Point& p, double v) { return p.x < v; });
  const auto lo = hi - 1;
  const double t = (x - lo->x) / (hi->x - lo->x);
  return lo->y + t * (hi->y - lo->y);
}

}  // namespace sailhelm
