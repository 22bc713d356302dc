#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "toridyn/map.hpp"
#include "toridyn/vec.hpp"

namespace toridyn {

struct GridRegion;  // region.hpp

/// One finite-horizon displacement average (f^n(start) - start) / n.
struct DisplacementSample {
  Vec2 start;
  long horizon = 1;
  Vec2 value;
};

/// Convex polygon with counterclockwise, strictly convex vertex list.
/// Degenerates to one vertex (point) or two (segment).
struct ConvexPolygon {
  std::vector<Vec2> vertices;
};

/// True iff the vertex list is CCW, strictly convex (no three collinear) and
/// free of duplicates within 1e-12.
bool is_valid_polygon(const ConvexPolygon& poly);

/// Minimal convex polygon containing all points (monotone chain). Collinear
/// inputs give a 2-vertex segment, coincident inputs a single vertex.
ConvexPolygon convex_hull(std::span<const Vec2> points);

/// Radius of the largest inscribed disk (Chebyshev radius); 0 for point and
/// segment hulls.
double diffusion_rate(const ConvexPolygon& hull);

/// Chebyshev center paired with the radius above.
Vec2 chebyshev_center(const ConvexPolygon& hull);

double polygon_diameter(const ConvexPolygon& poly);

/// Symmetric Hausdorff distance between convex polygons: exact
/// vertex-to-polygon term, sharpened by support-function sampling at 360
/// angles.
double hausdorff_distance(const ConvexPolygon& a, const ConvexPolygon& b);

struct Ball {
  TorusPoint center;
  double radius = 0.0;
};

struct RotationSetEstimate {
  std::vector<DisplacementSample> samples;
  ConvexPolygon hull;
  long horizon = 0;
  int grid = 0;  // G for grid sampling, 0 for explicit start sets
  std::string map_label;
  uint64_t seed = 0;
  double max_step = 0.0;        // largest single-iterate displacement seen
  double max_displacement = 0;  // largest |f^n(z) - z| seen, n <= horizon
};

/// Finite-horizon rotation-set estimate from the G x G lattice of start
/// points offset by (0.5/G, 0.5/G).
RotationSetEstimate estimate_rotation_set(const LiftedMap& m, int G, long N,
                                          int threads = 1);

/// Local rotation set over a ball: S start points drawn from a seeded
/// low-discrepancy sequence restricted to the ball. Only the start point is
/// constrained to the region.
RotationSetEstimate estimate_local_rotation_set(const LiftedMap& m,
                                                const Ball& ball, int S, long N,
                                                uint64_t seed = 0,
                                                int threads = 1);

/// Same, with start points drawn from the active cells of a bitmap region.
RotationSetEstimate estimate_local_rotation_set(const LiftedMap& m,
                                                const GridRegion& region,
                                                int S, long N,
                                                uint64_t seed = 0,
                                                int threads = 1);

/// Finite-N Birkhoff surrogate (f^N(z) - z) / N.
Vec2 birkhoff_rotation_vector(const LiftedMap& m, const Vec2& z, long N);

}  // namespace toridyn
