#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace toridyn {

using Vec2 = Eigen::Vector2d;
using IntVec = Eigen::Vector2i;
using Mat2i = Eigen::Matrix2i;

/// v^perp = (-b, a) for v = (a, b).
inline IntVec perp(const IntVec& v) { return IntVec(-v.y(), v.x()); }
inline Vec2 perp(const Vec2& v) { return Vec2(-v.y(), v.x()); }

/// Fractional part in [0, 1).
inline double frac(double t) {
  double r = t - std::floor(t);
  return r >= 1.0 ? 0.0 : r;
}

inline bool finite(const Vec2& z) {
  return std::isfinite(z.x()) && std::isfinite(z.y());
}

/// A point of the torus R^2 / Z^2, coordinates in [0,1) x [0,1).
struct TorusPoint {
  double x = 0.0;
  double y = 0.0;
};

/// Quotient projection pi: R^2 -> T^2.
inline TorusPoint project(const Vec2& z) {
  if (!finite(z)) throw std::invalid_argument("project: non-finite point");
  return TorusPoint{frac(z.x()), frac(z.y())};
}

inline Vec2 to_vec(const TorusPoint& p) { return Vec2(p.x, p.y); }

/// Distance on the torus (minimum over deck translations).
inline double torus_distance(const TorusPoint& a, const TorusPoint& b) {
  double dx = std::fabs(a.x - b.x);
  double dy = std::fabs(a.y - b.y);
  dx = std::min(dx, 1.0 - dx);
  dy = std::min(dy, 1.0 - dy);
  return std::sqrt(dx * dx + dy * dy);
}

inline double torus_distance(const Vec2& a, const Vec2& b) {
  return torus_distance(project(a), project(b));
}

}  // namespace toridyn
