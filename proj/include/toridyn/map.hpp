#pragma once

#include <functional>
#include <string>
#include <vector>

#include "toridyn/vec.hpp"

namespace toridyn {

/// A torus homeomorphism presented by a lift to the plane.
///
/// The lift satisfies eval(z + v) = eval(z) + linear_part * v for all v in
/// Z^2. The map is homotopic to the identity iff linear_part is the identity
/// matrix; all rotation/essentiality operations require that.
struct LiftedMap {
  std::function<Vec2(const Vec2&)> eval;
  Mat2i linear_part = Mat2i::Identity();
  std::string label;
  std::function<Vec2(const Vec2&)> inverse_eval;  // may be empty

  bool has_inverse() const { return static_cast<bool>(inverse_eval); }
  bool homotopic_to_identity() const {
    return linear_part == Mat2i::Identity();
  }
  Vec2 operator()(const Vec2& z) const { return eval(z); }
};

/// Built-in maps. Names and parameter counts:
///   identity
///   translation(ax, ay)          z -> z + a
///   standard(K)                  kicked two-shear lift with weak damping:
///                                x' = damp(x + (K/6) sin(2pi y)),
///                                y' = damp(y + (K/6) sin(2pi x')),
///                                damp(u) = u - (1/16pi) sin(8pi u)
///   zaslavsky(K, c)              fourth iterate of the web-map generator
///   zaslavsky_generator(K, c)    M(x, y) = (y, -x - K sin(2pi y - c)),
///                                linear part [[0,1],[-1,0]]
///   disk_twist(cx, cy, r0, a)    rotation by a*(1 - r/r0) about the lifted
///                                center inside radius r0, identity outside,
///                                replicated over Z^2; requires r0 < 1/2
LiftedMap make_map(const std::string& name, const std::vector<double>& params);

/// Parses "name(p1,p2,...)" (identifier plus comma-separated decimal
/// literals) and dispatches to make_map. "identity" alone is also accepted.
LiftedMap parse_map_spec(const std::string& spec);

/// The lift of f^k (k >= 1), with linear part L^k.
LiftedMap power_map(const LiftedMap& m, int k);

/// Orbit segment z, f(z), ..., f^n(z); length |n|+1. Negative n needs an
/// inverse.
std::vector<Vec2> iterate_lift(const LiftedMap& m, const Vec2& z, long n);

/// f^n(z) - z for n >= 1; requires linear part = identity, so the result is
/// invariant under integer translations of z.
Vec2 displacement(const LiftedMap& m, const Vec2& z, long n);

}  // namespace toridyn
