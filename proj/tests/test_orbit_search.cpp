#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "toridyn/map.hpp"
#include "toridyn/orbit_search.hpp"
#include "toridyn/vec.hpp"

using namespace toridyn;

namespace {

bool roots_contain(const std::vector<PeriodicRoot>& roots, const Vec2& p,
                   double tol) {
  for (const auto& r : roots)
    if (torus_distance(r.point, p) <= tol) return true;
  return false;
}

// Skew product with an exact two-step translation: f(x, y) =
// (x + 1/2, y + b cos(2 pi x)). The cosine kicks cancel in pairs, so
// deviations along (1,0)-perp stay bounded while x advances by 1/2 a step.
LiftedMap make_skew(double b) {
  LiftedMap m;
  m.eval = [b](const Vec2& z) {
    return Vec2(z.x() + 0.5, z.y() + b * std::cos(2.0 * M_PI * frac(z.x())));
  };
  m.inverse_eval = [b](const Vec2& z) {
    double x = z.x() - 0.5;
    return Vec2(x, z.y() - b * std::cos(2.0 * M_PI * frac(x)));
  };
  m.label = "skew";
  return m;
}

}  // namespace

TEST_CASE("realization target validation") {
  RealizationTarget ok{1, 0, 2};
  ok.validate();
  RealizationTarget zero{0, 0, 1};
  zero.validate();

  RealizationTarget bad_q{1, 0, 0};
  CHECK_THROWS_AS(bad_q.validate(), std::invalid_argument);
  RealizationTarget not_coprime{2, 2, 2};
  CHECK_THROWS_AS(not_coprime.validate(), std::invalid_argument);
  RealizationTarget fine{2, 2, 1};  // gcd with q = 1
  fine.validate();
}

TEST_CASE("verify_realization") {
  LiftedMap id = make_map("identity", {});
  CHECK(verify_realization(id, Vec2(0.37, 0.91), RealizationTarget{0, 0, 1}) ==
        0.0);
  CHECK(verify_realization(id, Vec2(0, 0), RealizationTarget{1, 0, 1}) == 1.0);

  LiftedMap st = make_map("standard", {1.5});
  CHECK(verify_realization(st, Vec2(0, 0), RealizationTarget{0, 0, 1}) == 0.0);

  LiftedMap tr = make_map("translation", {0.5, 0.0});
  CHECK(verify_realization(tr, Vec2(0.2, 0.8), RealizationTarget{1, 0, 2}) <=
        1e-15);
}

TEST_CASE("fixed points of the standard map") {
  LiftedMap st = make_map("standard", {1.5});
  auto roots = find_periodic_realizing(st, RealizationTarget{0, 0, 1}, 12, 50,
                                       1e-10);
  REQUIRE_FALSE(roots.empty());
  CHECK(roots_contain(roots, Vec2(0.0, 0.0), 1e-7));
  CHECK(roots_contain(roots, Vec2(0.5, 0.0), 1e-7));
  for (const auto& r : roots) {
    CHECK(r.residual < 1e-10);
    CHECK(verify_realization(st, r.point, RealizationTarget{0, 0, 1}) < 1e-9);
  }
  // Roots are pairwise distinct modulo Z^2.
  for (size_t i = 0; i < roots.size(); ++i)
    for (size_t j = i + 1; j < roots.size(); ++j)
      CHECK(torus_distance(roots[i].point, roots[j].point) > 1e-9);
}

TEST_CASE("translation by a half realizes (1,0,2) everywhere") {
  LiftedMap tr = make_map("translation", {0.5, 0.0});
  auto roots = find_periodic_realizing(tr, RealizationTarget{1, 0, 2}, 4, 5,
                                       1e-10);
  // g vanishes identically: every grid seed is a root; dedup keeps them all
  // because they sit far apart.
  CHECK(roots.size() == 16);
  for (const auto& r : roots) CHECK(r.residual <= 1e-12);
}

TEST_CASE("unrealizable targets give an empty list") {
  LiftedMap id = make_map("identity", {});
  auto roots = find_periodic_realizing(id, RealizationTarget{1, 0, 1}, 6, 30,
                                       1e-10);
  CHECK(roots.empty());
}

TEST_CASE("find_periodic_realizing rejects bad inputs") {
  LiftedMap gen = make_map("zaslavsky_generator", {0.19, 1.69});
  CHECK_THROWS_AS(find_periodic_realizing(gen, RealizationTarget{0, 0, 1}, 4,
                                          10, 1e-8),
                  std::invalid_argument);
  LiftedMap id = make_map("identity", {});
  CHECK_THROWS_AS(find_periodic_realizing(id, RealizationTarget{0, 0, 1}, 0,
                                          10, 1e-8),
                  std::invalid_argument);
  CHECK_THROWS_AS(find_periodic_realizing(id, RealizationTarget{0, 0, 1}, 4,
                                          10, -1.0),
                  std::invalid_argument);
}

TEST_CASE("annularity probe on translations and skews") {
  // Pure translation: no deviation orthogonal to its own direction.
  LiftedMap tr = make_map("translation", {0.5, 0.0});
  DeviationCurve c = annularity_probe(tr, IntVec(1, 0), 32, 256);
  CHECK(c.verdict == GrowthVerdict::bounded_looking);
  for (double v : c.values) CHECK(v == 0.0);
  CHECK(c.horizons == std::vector<long>{32, 64, 128, 256});

  // Skew: deviations bounded along (1,0) (the cosine kicks cancel in
  // two-step pairs), growing along (0,1) (x advances linearly).
  LiftedMap sk = make_skew(0.7);
  DeviationCurve bounded = annularity_probe(sk, IntVec(1, 0), 64, 512);
  CHECK(bounded.verdict == GrowthVerdict::bounded_looking);
  CHECK(bounded.values[3] <= 2.0 * 0.7);
  DeviationCurve growing = annularity_probe(sk, IntVec(0, 1), 64, 512);
  CHECK(growing.verdict == GrowthVerdict::growing);
  CHECK(growing.values[3] == doctest::Approx(256.0).epsilon(1e-9));

  // Chaotic diffusion grows in every direction.
  LiftedMap st = make_map("standard", {6.0});
  DeviationCurve chaos = annularity_probe(st, IntVec(1, 0), 64, 2048);
  CHECK(chaos.verdict == GrowthVerdict::growing);
}

TEST_CASE("deviation curves are invariant under flipping the direction") {
  LiftedMap z = make_map("zaslavsky", {0.19, 1.69});
  DeviationCurve a = annularity_probe(z, IntVec(1, 0), 32, 256, 5);
  DeviationCurve b = annularity_probe(z, IntVec(-1, 0), 32, 256, 5);
  REQUIRE(a.values.size() == b.values.size());
  for (size_t i = 0; i < a.values.size(); ++i) CHECK(a.values[i] == b.values[i]);
  CHECK(a.verdict == b.verdict);

  CHECK_THROWS_AS(annularity_probe(z, IntVec(0, 0), 32, 256),
                  std::invalid_argument);
  CHECK_THROWS_AS(annularity_probe(z, IntVec(1, 0), 0, 256),
                  std::invalid_argument);
  CHECK_THROWS_AS(annularity_probe(z, IntVec(1, 0), 32, 4),
                  std::invalid_argument);
  LiftedMap gen = make_map("zaslavsky_generator", {0.19, 1.69});
  CHECK_THROWS_AS(annularity_probe(gen, IntVec(1, 0), 32, 256),
                  std::invalid_argument);
}

TEST_CASE("irrotational probe") {
  LiftedMap id = make_map("identity", {});
  IrrotationalProbe p = irrotational_probe(id, 8, 100);
  CHECK(p.true_looking);
  CHECK(p.contains_zero);
  CHECK(p.hull_diameter == 0.0);

  // The disk twist keeps every orbit inside a bounded disk, so the hull
  // shrinks like 1/N and the verdict holds.
  LiftedMap dt = make_map("disk_twist", {0.5, 0.5, 0.25, 1.0});
  p = irrotational_probe(dt, 16, 400);
  CHECK(p.true_looking);

  // A translation is not irrotational: the hull is a point away from zero.
  LiftedMap tr = make_map("translation", {0.25, 0.0});
  p = irrotational_probe(tr, 8, 100);
  CHECK_FALSE(p.true_looking);
  CHECK_FALSE(p.contains_zero);

  // A drifting skew is rejected the same way.
  LiftedMap sk = make_skew(0.7);
  p = irrotational_probe(sk, 8, 128);
  CHECK_FALSE(p.true_looking);
  CHECK_FALSE(p.contains_zero);
}

TEST_CASE("growth verdict names") {
  CHECK(to_string(GrowthVerdict::bounded_looking) == "bounded-looking");
  CHECK(to_string(GrowthVerdict::growing) == "growing");
  CHECK(to_string(GrowthVerdict::inconclusive) == "inconclusive");
}
