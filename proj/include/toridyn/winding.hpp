#pragma once

#include <optional>
#include <span>
#include <vector>

#include "toridyn/map.hpp"
#include "toridyn/region.hpp"
#include "toridyn/vec.hpp"

namespace toridyn {

/// Finite planar arc or loop through straight segments.
struct Polyline {
  std::vector<Vec2> points;  // length >= 2, consecutive points distinct
  bool closed = false;       // first == last within 1e-9 when set

  void validate() const;
};

/// Total signed angle swept by p - z along the polyline, divided by 2 pi.
/// Closed inputs are rounded to the nearest integer (residual <= 1e-6
/// enforced). Throws when z lies within 1e-9 of the polyline.
double winding_index(const Polyline& p, const Vec2& z);

/// Same on a raw vertex sequence; zero-length segments contribute nothing,
/// so degenerate (constant) paths are fine.
double winding_index(std::span<const Vec2> vertices, const Vec2& z,
                     bool closed);

/// Straight-segment realization of the isotopy trajectory
/// z -> f(z) -> ... -> f^k(z).
struct IsotopyPath {
  Vec2 base;
  int steps = 0;
  std::vector<Vec2> vertices;  // the k+1 orbit points, in order
};

IsotopyPath isotopy_path(const LiftedMap& m, const Vec2& z, int k);

/// Linking number of a contractible k-periodic point q with a fixed point
/// p: the winding of the closed isotopy-trajectory loop of q about p.
/// Requires |f^k(q) - q| <= 1e-7 and |f(p) - p| <= 1e-9.
int linking_number_periodic(const LiftedMap& m, const Vec2& q, int k,
                            const Vec2& p);

/// Linking number of an invariant inessential region U with a fixed point p:
/// winding of gamma^k_z * sigma_z about p, where sigma_z runs from f^k(z)
/// back to z through the lifted cells of U (grid BFS). The base point
/// defaults to the center of the first active cell.
int linking_number_region(const LiftedMap& m, const GridRegion& U, int k,
                          const Vec2& p,
                          std::optional<Vec2> base = std::nullopt);

}  // namespace toridyn
