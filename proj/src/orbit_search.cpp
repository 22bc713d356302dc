#include "toridyn/orbit_search.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "toridyn/parallel.hpp"
#include "toridyn/rotation.hpp"
#include "toridyn/sampling.hpp"

namespace toridyn {

namespace {

Vec2 iterate(const LiftedMap& m, Vec2 z, int q) {
  for (int i = 0; i < q; ++i) z = m.eval(z);
  return z;
}

}  // namespace

void RealizationTarget::validate() const {
  if (q < 1) throw std::invalid_argument("RealizationTarget: q must be >= 1");
  int g = std::gcd(std::gcd(std::abs(p1), std::abs(p2)), q);
  if (g != 1)
    throw std::invalid_argument("RealizationTarget: (p1, p2, q) not coprime");
}

double verify_realization(const LiftedMap& m, const Vec2& z,
                          const RealizationTarget& t) {
  return (iterate(m, z, t.q) - z - Vec2(t.p1, t.p2)).norm();
}

std::vector<PeriodicRoot> find_periodic_realizing(const LiftedMap& m,
                                                  const RealizationTarget& t,
                                                  int grid, int newton_iters,
                                                  double tol, int threads) {
  t.validate();
  if (!m.homotopic_to_identity())
    throw std::invalid_argument(
        "find_periodic_realizing: map is not homotopic to the identity");
  if (grid < 1 || newton_iters < 1 || tol <= 0.0)
    throw std::invalid_argument("find_periodic_realizing: bad parameters");

  const Vec2 target(t.p1, t.p2);
  auto g = [&](const Vec2& z) { return Vec2(iterate(m, z, t.q) - z - target); };
  const double h = 1e-6;

  auto newton = [&](Vec2 z) -> std::optional<PeriodicRoot> {
    double res = g(z).norm();
    for (int it = 0; it < newton_iters; ++it) {
      if (res < tol) return PeriodicRoot{z, res};
      Vec2 gz = g(z);
      // Central finite-difference Jacobian.
      Vec2 dx = (g(z + Vec2(h, 0)) - g(z - Vec2(h, 0))) / (2 * h);
      Vec2 dy = (g(z + Vec2(0, h)) - g(z - Vec2(0, h))) / (2 * h);
      Eigen::Matrix2d J;
      J << dx.x(), dy.x(), dx.y(), dy.y();
      Vec2 step;
      Eigen::FullPivLU<Eigen::Matrix2d> lu(J);
      if (lu.isInvertible()) {
        step = lu.solve(gz);
      } else {
        // Singular Jacobian: fall back to a damped gradient-ish step.
        step = gz;
      }
      // Damped update: halve the step while the residual increases.
      double lambda = 1.0;
      Vec2 znew = z - step;
      double rnew = g(znew).norm();
      int halvings = 0;
      while (rnew > res && halvings < 20) {
        lambda *= 0.5;
        znew = z - lambda * step;
        rnew = g(znew).norm();
        ++halvings;
      }
      if (rnew > res) return std::nullopt;  // stuck
      z = znew;
      res = rnew;
    }
    if (res < tol) return PeriodicRoot{z, res};
    return std::nullopt;
  };

  std::vector<std::optional<PeriodicRoot>> found(
      static_cast<size_t>(grid) * grid);
  parallel_for(found.size(), threads, [&](size_t k) {
    int i = static_cast<int>(k) % grid;
    int j = static_cast<int>(k) / grid;
    found[k] = newton(Vec2((i + 0.5) / grid, (j + 0.5) / grid));
  });

  // Deduplicate modulo Z^2 at radius 10*tol; keep the smaller residual.
  std::vector<PeriodicRoot> roots;
  for (const auto& cand : found) {
    if (!cand) continue;
    PeriodicRoot r = *cand;
    r.point = Vec2(frac(r.point.x()), frac(r.point.y()));
    bool merged = false;
    for (auto& kept : roots)
      if (torus_distance(kept.point, r.point) <= 10.0 * tol) {
        if (r.residual < kept.residual) kept = r;
        merged = true;
        break;
      }
    if (!merged) roots.push_back(r);
  }
  return roots;
}

std::string to_string(GrowthVerdict v) {
  switch (v) {
    case GrowthVerdict::bounded_looking: return "bounded-looking";
    case GrowthVerdict::growing: return "growing";
    case GrowthVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

DeviationCurve annularity_probe(const LiftedMap& m, const IntVec& v,
                                int samples, long N, uint64_t seed,
                                int threads) {
  if (!m.homotopic_to_identity())
    throw std::invalid_argument(
        "annularity_probe: map is not homotopic to the identity");
  if (v == IntVec::Zero())
    throw std::invalid_argument("annularity_probe: zero direction");
  if (samples < 1 || N < 8)
    throw std::invalid_argument("annularity_probe: need samples >= 1, N >= 8");

  DeviationCurve curve;
  curve.direction = v;
  curve.horizons = {N / 8, N / 4, N / 2, N};
  // Deviations are measured along v_perp; replacing v by -v flips the sign
  // of the projection only, so the curve is unchanged.
  Vec2 u = perp(Vec2(v.x(), v.y())).normalized();

  QuasiRandom2D seq(seed);
  std::vector<Vec2> starts(samples);
  for (auto& s : starts) s = seq.next();

  std::vector<std::array<double, 4>> dev(samples);
  parallel_for(starts.size(), threads, [&](size_t k) {
    Vec2 z = starts[k];
    Vec2 w = z;
    std::array<double, 4> d{0, 0, 0, 0};
    double running = 0.0;
    size_t next_h = 0;
    for (long n = 1; n <= N; ++n) {
      w = m.eval(w);
      running = std::max(running, std::fabs(u.dot(w - z)));
      while (next_h < 4 && n == curve.horizons[next_h]) {
        d[next_h] = running;
        ++next_h;
      }
    }
    dev[k] = d;
  });
  curve.values.assign(4, 0.0);
  for (const auto& d : dev)
    for (int i = 0; i < 4; ++i)
      curve.values[i] = std::max(curve.values[i], d[i]);

  double dN = curve.values[3], dHalf = curve.values[2];
  if (dHalf > 0.0 && dN / dHalf >= 1.2 && dN > 1.0)
    curve.verdict = GrowthVerdict::growing;
  else if (dN <= dHalf * 1.02 + 1e-6)
    curve.verdict = GrowthVerdict::bounded_looking;
  else
    curve.verdict = GrowthVerdict::inconclusive;
  return curve;
}

IrrotationalProbe irrotational_probe(const LiftedMap& m, int G, long N,
                                     int threads) {
  RotationSetEstimate est = estimate_rotation_set(m, G, N, threads);
  IrrotationalProbe probe;
  probe.hull_diameter = polygon_diameter(est.hull);
  probe.threshold = 2.0 * est.max_displacement / static_cast<double>(N);
  // Distance from the origin to the hull.
  double d0 = [&] {
    if (est.hull.vertices.size() == 1) return est.hull.vertices[0].norm();
    double best = std::numeric_limits<double>::infinity();
    size_t n = est.hull.vertices.size();
    bool inside = n >= 3;
    for (size_t i = 0; i < n; ++i) {
      const Vec2& a = est.hull.vertices[i];
      const Vec2& b = est.hull.vertices[(i + 1) % n];
      Vec2 e = b - a;
      if (n >= 3 && e.x() * (-a.y()) - e.y() * (-a.x()) < 0.0) inside = false;
      double len2 = e.squaredNorm();
      double t = len2 > 0 ? std::clamp((-a).dot(e) / len2, 0.0, 1.0) : 0.0;
      best = std::min(best, (a + t * e).norm());
      if (n == 2) break;
    }
    return inside ? 0.0 : best;
  }();
  // Containment is geometric: a genuinely irrotational map pins the origin
  // inside (or at) the hull, while any drift pushes the hull away by O(1).
  probe.contains_zero = d0 <= 1e-9;
  probe.true_looking =
      probe.hull_diameter <= probe.threshold + 1e-12 && probe.contains_zero;
  return probe;
}

}  // namespace toridyn
