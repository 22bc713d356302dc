#include "toridyn/rotation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "toridyn/parallel.hpp"
#include "toridyn/region.hpp"
#include "toridyn/sampling.hpp"

namespace toridyn {

namespace {

double cross(const Vec2& a, const Vec2& b) {
  return a.x() * b.y() - a.y() * b.x();
}

double cross3(const Vec2& o, const Vec2& a, const Vec2& b) {
  return cross(a - o, b - o);
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  Vec2 d = b - a;
  double len2 = d.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  double t = std::clamp((p - a).dot(d) / len2, 0.0, 1.0);
  return (p - (a + t * d)).norm();
}

bool inside_convex(const Vec2& p, const ConvexPolygon& poly) {
  if (poly.vertices.size() < 3) return false;
  size_t n = poly.vertices.size();
  for (size_t i = 0; i < n; ++i) {
    if (cross3(poly.vertices[i], poly.vertices[(i + 1) % n], p) < 0.0)
      return false;
  }
  return true;
}

double point_polygon_distance(const Vec2& p, const ConvexPolygon& poly) {
  if (poly.vertices.size() == 1) return (p - poly.vertices[0]).norm();
  if (inside_convex(p, poly)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  size_t n = poly.vertices.size();
  for (size_t i = 0; i + 1 <= n; ++i) {
    const Vec2& a = poly.vertices[i];
    const Vec2& b = poly.vertices[(i + 1) % n];
    best = std::min(best, point_segment_distance(p, a, b));
    if (n == 2 && i == 0) break;  // segment: one edge suffices
  }
  return best;
}

double support(const ConvexPolygon& poly, const Vec2& dir) {
  double best = -std::numeric_limits<double>::infinity();
  for (const Vec2& v : poly.vertices) best = std::max(best, v.dot(dir));
  return best;
}

// Chebyshev center and radius of a CCW polygon with >= 3 vertices. The LP
// max r s.t. dist(c, edge_i) >= r has an optimal basic solution tight on
// three edges; scan all triples.
std::pair<Vec2, double> chebyshev_solve(const ConvexPolygon& hull) {
  size_t n = hull.vertices.size();
  std::vector<double> ea(n), eb(n), ec(n);
  for (size_t i = 0; i < n; ++i) {
    const Vec2& v = hull.vertices[i];
    Vec2 e = hull.vertices[(i + 1) % n] - v;
    double len = e.norm();
    ea[i] = -e.y() / len;
    eb[i] = e.x() / len;
    ec[i] = (e.y() * v.x() - e.x() * v.y()) / len;
  }
  auto min_dist = [&](const Vec2& c) {
    double d = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < n; ++i)
      d = std::min(d, ea[i] * c.x() + eb[i] * c.y() + ec[i]);
    return d;
  };
  double best = 0.0;
  Vec2 center = hull.vertices[0];
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      for (size_t k = j + 1; k < n; ++k) {
        Eigen::Matrix3d A;
        A << ea[i], eb[i], -1.0, ea[j], eb[j], -1.0, ea[k], eb[k], -1.0;
        Eigen::Vector3d rhs(-ec[i], -ec[j], -ec[k]);
        Eigen::FullPivLU<Eigen::Matrix3d> lu(A);
        if (!lu.isInvertible()) continue;
        Eigen::Vector3d sol = lu.solve(rhs);
        Vec2 c(sol[0], sol[1]);
        double r = sol[2];
        if (r <= best) continue;
        if (min_dist(c) >= r - 1e-9 * (1.0 + r)) {
          best = r;
          center = c;
        }
      }
  return {center, best};
}

// Worker shared by the global and local estimators.
RotationSetEstimate run_samples(const LiftedMap& m,
                                const std::vector<Vec2>& starts, long N,
                                int threads) {
  RotationSetEstimate est;
  est.horizon = N;
  est.map_label = m.label;
  est.samples.resize(starts.size());
  std::vector<double> max_step(starts.size(), 0.0);
  std::vector<double> max_disp(starts.size(), 0.0);
  parallel_for(starts.size(), threads, [&](size_t k) {
    Vec2 z = starts[k];
    Vec2 w = z;
    double ms = 0.0, md = 0.0;
    for (long i = 0; i < N; ++i) {
      Vec2 next = m.eval(w);
      ms = std::max(ms, (next - w).norm());
      w = next;
      md = std::max(md, (w - z).norm());
    }
    est.samples[k] = DisplacementSample{z, N, (w - z) / static_cast<double>(N)};
    max_step[k] = ms;
    max_disp[k] = md;
  });
  for (size_t k = 0; k < starts.size(); ++k) {
    est.max_step = std::max(est.max_step, max_step[k]);
    est.max_displacement = std::max(est.max_displacement, max_disp[k]);
  }
  std::vector<Vec2> values;
  values.reserve(est.samples.size());
  for (const auto& s : est.samples) values.push_back(s.value);
  est.hull = convex_hull(values);
  return est;
}

void require_identity_part(const LiftedMap& m, const char* who) {
  if (!m.homotopic_to_identity())
    throw std::invalid_argument(std::string(who) +
                                ": map is not homotopic to the identity");
}

}  // namespace

bool is_valid_polygon(const ConvexPolygon& poly) {
  size_t n = poly.vertices.size();
  if (n == 0) return false;
  for (const Vec2& v : poly.vertices)
    if (!finite(v)) return false;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if ((poly.vertices[i] - poly.vertices[j]).norm() <= 1e-12) return false;
  if (n < 3) return true;
  for (size_t i = 0; i < n; ++i) {
    const Vec2& a = poly.vertices[i];
    const Vec2& b = poly.vertices[(i + 1) % n];
    const Vec2& c = poly.vertices[(i + 2) % n];
    if (cross3(a, b, c) <= 0.0) return false;
  }
  return true;
}

ConvexPolygon convex_hull(std::span<const Vec2> points) {
  if (points.empty())
    throw std::invalid_argument("convex_hull: empty input");
  std::vector<Vec2> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Vec2& a, const Vec2& b) {
                          return (a - b).norm() <= 1e-12;
                        }),
            pts.end());
  if (pts.size() <= 2) return ConvexPolygon{std::move(pts)};

  std::vector<Vec2> hull(2 * pts.size());
  size_t k = 0;
  for (const Vec2& p : pts) {  // lower chain
    while (k >= 2 && cross3(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  size_t lower = k + 1;
  for (size_t i = pts.size() - 1; i-- > 0;) {  // upper chain
    const Vec2& p = pts[i];
    while (k >= lower && cross3(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  if (hull.size() == 2 && (hull[0] - hull[1]).norm() <= 1e-12) hull.pop_back();
  return ConvexPolygon{std::move(hull)};
}

double diffusion_rate(const ConvexPolygon& hull) {
  if (hull.vertices.size() < 3) return 0.0;
  return chebyshev_solve(hull).second;
}

Vec2 chebyshev_center(const ConvexPolygon& hull) {
  if (hull.vertices.size() == 1) return hull.vertices[0];
  if (hull.vertices.size() == 2)
    return 0.5 * (hull.vertices[0] + hull.vertices[1]);
  return chebyshev_solve(hull).first;
}

double polygon_diameter(const ConvexPolygon& poly) {
  double best = 0.0;
  for (size_t i = 0; i < poly.vertices.size(); ++i)
    for (size_t j = i + 1; j < poly.vertices.size(); ++j)
      best = std::max(best, (poly.vertices[i] - poly.vertices[j]).norm());
  return best;
}

double hausdorff_distance(const ConvexPolygon& a, const ConvexPolygon& b) {
  double d = 0.0;
  for (const Vec2& v : a.vertices)
    d = std::max(d, point_polygon_distance(v, b));
  for (const Vec2& v : b.vertices)
    d = std::max(d, point_polygon_distance(v, a));
  for (int k = 0; k < 360; ++k) {
    double t = 2.0 * std::numbers::pi * k / 360.0;
    Vec2 dir(std::cos(t), std::sin(t));
    d = std::max(d, std::fabs(support(a, dir) - support(b, dir)));
  }
  return d;
}

RotationSetEstimate estimate_rotation_set(const LiftedMap& m, int G, long N,
                                          int threads) {
  require_identity_part(m, "estimate_rotation_set");
  if (G < 1 || N < 1)
    throw std::invalid_argument("estimate_rotation_set: G and N must be >= 1");
  std::vector<Vec2> starts;
  starts.reserve(static_cast<size_t>(G) * G);
  for (int j = 0; j < G; ++j)
    for (int i = 0; i < G; ++i)
      starts.emplace_back((i + 0.5) / G, (j + 0.5) / G);
  RotationSetEstimate est = run_samples(m, starts, N, threads);
  est.grid = G;
  return est;
}

RotationSetEstimate estimate_local_rotation_set(const LiftedMap& m,
                                                const Ball& ball, int S, long N,
                                                uint64_t seed, int threads) {
  require_identity_part(m, "estimate_local_rotation_set");
  if (ball.radius <= 0.0)
    throw std::invalid_argument("estimate_local_rotation_set: empty region");
  if (S < 1 || N < 1)
    throw std::invalid_argument(
        "estimate_local_rotation_set: S and N must be >= 1");
  std::vector<Vec2> starts;
  starts.reserve(S);
  QuasiRandom2D seq(seed);
  Vec2 c = to_vec(ball.center);
  double r = ball.radius;
  while (static_cast<int>(starts.size()) < S) {
    Vec2 u = seq.next();
    Vec2 p = c + Vec2((2.0 * u.x() - 1.0) * r, (2.0 * u.y() - 1.0) * r);
    if ((p - c).norm() <= r) starts.push_back(p);
  }
  RotationSetEstimate est = run_samples(m, starts, N, threads);
  est.seed = seed;
  return est;
}

RotationSetEstimate estimate_local_rotation_set(const LiftedMap& m,
                                                const GridRegion& region,
                                                int S, long N, uint64_t seed,
                                                int threads) {
  require_identity_part(m, "estimate_local_rotation_set");
  if (S < 1 || N < 1)
    throw std::invalid_argument(
        "estimate_local_rotation_set: S and N must be >= 1");
  std::vector<int> active;
  for (int j = 0; j < region.R; ++j)
    for (int i = 0; i < region.R; ++i)
      if (region.at(i, j)) active.push_back(region.index(i, j));
  if (active.empty())
    throw std::invalid_argument("estimate_local_rotation_set: empty region");
  std::vector<Vec2> starts;
  starts.reserve(S);
  QuasiRandom2D seq(seed);
  for (int k = 0; k < S; ++k) {
    Vec2 u = seq.next();
    int cell = active[static_cast<size_t>(u.x() * active.size()) %
                      active.size()];
    int i = cell % region.R, j = cell / region.R;
    Vec2 v = seq.next();
    starts.emplace_back((i + v.x()) / region.R, (j + v.y()) / region.R);
  }
  RotationSetEstimate est = run_samples(m, starts, N, threads);
  est.seed = seed;
  return est;
}

Vec2 birkhoff_rotation_vector(const LiftedMap& m, const Vec2& z, long N) {
  require_identity_part(m, "birkhoff_rotation_vector");
  if (N < 1)
    throw std::invalid_argument("birkhoff_rotation_vector: N must be >= 1");
  return displacement(m, z, N) / static_cast<double>(N);
}

}  // namespace toridyn
