#pragma once

#include <string>
#include <vector>

#include "toridyn/map.hpp"
#include "toridyn/vec.hpp"

namespace toridyn {

/// Rational rotation vector (p1/q, p2/q) in reduced form.
struct RealizationTarget {
  int p1 = 0;
  int p2 = 0;
  int q = 1;

  void validate() const;  // q >= 1, gcd(p1, p2, q) = 1
};

struct PeriodicRoot {
  Vec2 point;
  double residual = 0.0;
};

/// Roots of g(z) = f^q(z) - z - (p1, p2): grid seeding plus damped Newton
/// with a central finite-difference Jacobian (h = 1e-6), deduplicated modulo
/// Z^2 at radius 10*tol. An empty list is a normal outcome.
std::vector<PeriodicRoot> find_periodic_realizing(const LiftedMap& m,
                                                  const RealizationTarget& t,
                                                  int grid, int newton_iters,
                                                  double tol,
                                                  int threads = 1);

/// |f^q(z) - z - (p1, p2)|.
double verify_realization(const LiftedMap& m, const Vec2& z,
                          const RealizationTarget& t);

enum class GrowthVerdict { bounded_looking, growing, inconclusive };

std::string to_string(GrowthVerdict v);

/// Max deviations orthogonal to a lattice direction at doubling horizons.
struct DeviationCurve {
  IntVec direction;
  std::vector<long> horizons;
  std::vector<double> values;  // d(n) = max_x |<f^n(x) - x, v_perp/|v_perp|>|
  GrowthVerdict verdict = GrowthVerdict::inconclusive;
};

/// Probes annularity in direction v: d(n) at n in {N/8, N/4, N/2, N} over a
/// low-discrepancy start set. growing if d(N)/d(N/2) >= 1.2 and d(N) > 1;
/// bounded-looking if d(N) <= 1.02 d(N/2) + 1e-6.
DeviationCurve annularity_probe(const LiftedMap& m, const IntVec& v,
                                int samples, long N, uint64_t seed = 0,
                                int threads = 1);

struct IrrotationalProbe {
  bool true_looking = false;
  double hull_diameter = 0.0;
  double threshold = 0.0;  // 2 * max-orbit-displacement / N
  bool contains_zero = false;
};

/// true-looking iff the rotation-set hull has diameter below
/// 2*max-displacement/N and contains the origin.
IrrotationalProbe irrotational_probe(const LiftedMap& m, int G, long N,
                                     int threads = 1);

}  // namespace toridyn
