#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "toridyn/map.hpp"
#include "toridyn/vec.hpp"

using namespace toridyn;

namespace {

// Independent plain-double re-implementation of the web-map orbit, used as
// an oracle for the library's lift evaluation.
std::pair<double, double> web_orbit_oracle(double K, double c, double x,
                                           double y, long generator_steps) {
  const double twopi = 2.0 * std::numbers::pi;
  for (long i = 0; i < generator_steps; ++i) {
    double nx = y;
    double ny = -x - K * std::sin(twopi * (y - std::floor(y)) - c);
    x = nx;
    y = ny;
  }
  return {x, y};
}

std::vector<LiftedMap> builtin_maps() {
  std::vector<LiftedMap> maps;
  maps.push_back(make_map("identity", {}));
  maps.push_back(make_map("translation", {0.25, 0.125}));
  maps.push_back(make_map("standard", {1.5}));
  maps.push_back(make_map("standard", {6.0}));
  maps.push_back(make_map("zaslavsky", {0.19, 1.69}));
  maps.push_back(make_map("zaslavsky_generator", {0.19, 1.69}));
  maps.push_back(make_map("disk_twist", {0.5, 0.5, 0.25, 1.0}));
  return maps;
}

}  // namespace

TEST_CASE("project takes fractional parts into [0,1)") {
  TorusPoint p = project(Vec2(1.25, -0.5));
  CHECK(p.x == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(p.y == doctest::Approx(0.5).epsilon(1e-15));

  TorusPoint q = project(Vec2(0.0, 0.0));
  CHECK(q.x == 0.0);
  CHECK(q.y == 0.0);

  TorusPoint r = project(Vec2(3.0, 2.0));
  CHECK(r.x == 0.0);
  CHECK(r.y == 0.0);

  // Idempotence of the projection.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  for (int i = 0; i < 200; ++i) {
    TorusPoint a = project(Vec2(u(rng), u(rng)));
    TorusPoint b = project(to_vec(a));
    CHECK(a.x == b.x);
    CHECK(a.y == b.y);
  }

  CHECK_THROWS_AS(project(Vec2(std::nan(""), 0.0)), std::invalid_argument);
}

TEST_CASE("make_map rejects bad specs") {
  CHECK_THROWS_AS(make_map("nope", {}), std::invalid_argument);
  CHECK_THROWS_AS(make_map("standard", {1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_map("disk_twist", {0.5, 0.5, 0.6, 1.0}),
                  std::invalid_argument);  // copies would overlap
}

TEST_CASE("map spec grammar") {
  LiftedMap m = parse_map_spec("zaslavsky(0.19,1.69)");
  CHECK(m.label == "zaslavsky(0.19,1.69)");
  CHECK(parse_map_spec("identity").homotopic_to_identity());
  CHECK(parse_map_spec(" translation( 0.25 , 0.125 ) ").eval(Vec2(0, 0)) ==
        Vec2(0.25, 0.125));
  CHECK_THROWS_AS(parse_map_spec("standard(1.5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_map_spec("standard(a)"), std::invalid_argument);
  CHECK_THROWS_AS(parse_map_spec("standard(1.5)x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_map_spec(""), std::invalid_argument);
}

TEST_CASE("zaslavsky generator with K=0 is the linear rotation") {
  LiftedMap m = make_map("zaslavsky_generator", {0.0, 0.0});
  Vec2 w = m.eval(Vec2(0.25, 0.5));
  CHECK(w.x() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(w.y() == doctest::Approx(-0.25).epsilon(1e-15));
  CHECK(m.linear_part(0, 0) == 0);
  CHECK(m.linear_part(0, 1) == 1);
  CHECK(m.linear_part(1, 0) == -1);
  CHECK(m.linear_part(1, 1) == 0);

  // M^4 = Id when K = 0.
  LiftedMap z = make_map("zaslavsky", {0.0, 0.0});
  CHECK(z.homotopic_to_identity());
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 50; ++i) {
    Vec2 p(u(rng), u(rng));
    CHECK((z.eval(p) - p).norm() <= 1e-12);
  }
}

TEST_CASE("zaslavsky equals four generator steps pointwise") {
  LiftedMap z = make_map("zaslavsky", {0.19, 1.69});
  LiftedMap g = make_map("zaslavsky_generator", {0.19, 1.69});
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 100; ++i) {
    Vec2 p(u(rng), u(rng));
    Vec2 w = p;
    for (int s = 0; s < 4; ++s) w = g.eval(w);
    CHECK((z.eval(p) - w).norm() <= 1e-12);
  }
}

TEST_CASE("equivariance across the built-in maps") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_int_distribution<int> iv(-3, 3);
  for (const auto& m : builtin_maps()) {
    for (int i = 0; i < 100; ++i) {
      Vec2 z(u(rng), u(rng));
      IntVec v(iv(rng), iv(rng));
      Vec2 lhs = m.eval(z + v.cast<double>());
      Vec2 rhs = m.eval(z) + (m.linear_part * v).cast<double>();
      CHECK((lhs - rhs).norm() <= 1e-9);
    }
  }
}

TEST_CASE("inverse round-trips") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (const auto& m : builtin_maps()) {
    REQUIRE(m.has_inverse());
    for (int i = 0; i < 50; ++i) {
      Vec2 z(u(rng), u(rng));
      CHECK((m.eval(m.inverse_eval(z)) - z).norm() <= 1e-7);
      CHECK((m.inverse_eval(m.eval(z)) - z).norm() <= 1e-7);
    }
  }
}

TEST_CASE("iterate_lift basics") {
  LiftedMap id = make_map("identity", {});
  auto orbit = iterate_lift(id, Vec2(0.3, 0.7), 5);
  REQUIRE(orbit.size() == 6);
  for (const auto& p : orbit) CHECK(p == Vec2(0.3, 0.7));

  LiftedMap tr = make_map("translation", {0.25, 0.125});
  auto torbit = iterate_lift(tr, Vec2(0, 0), 4);
  REQUIRE(torbit.size() == 5);
  CHECK(torbit.back().x() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(torbit.back().y() == doctest::Approx(0.5).epsilon(1e-15));

  // Negative n walks the inverse.
  auto back = iterate_lift(tr, Vec2(0, 0), -2);
  CHECK(back.back() == Vec2(-0.5, -0.25));

  LiftedMap no_inv = tr;
  no_inv.inverse_eval = nullptr;
  CHECK_THROWS_AS(iterate_lift(no_inv, Vec2(0, 0), -1), std::invalid_argument);
}

TEST_CASE("zaslavsky orbit matches the independent oracle") {
  const double K = 0.19, c = 1.69;
  LiftedMap z = make_map("zaslavsky", {K, c});
  auto orbit = iterate_lift(z, Vec2(0.1, 0.1), 1000);
  auto [ox, oy] = web_orbit_oracle(K, c, 0.1, 0.1, 4000);
  CHECK(orbit.back().x() == doctest::Approx(ox).epsilon(1e-9));
  CHECK(orbit.back().y() == doctest::Approx(oy).epsilon(1e-9));
}

TEST_CASE("displacement") {
  LiftedMap tr = make_map("translation", {0.25, 0.125});
  Vec2 d = displacement(tr, Vec2(0.4, 0.9), 8);
  CHECK(d.x() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(d.y() == doctest::Approx(1.0).epsilon(1e-12));

  LiftedMap id = make_map("identity", {});
  CHECK(displacement(id, Vec2(0.1, 0.2), 5) == Vec2(0, 0));

  // The origin is a fixed point of the standard map.
  LiftedMap st = make_map("standard", {1.5});
  for (long n : {1L, 3L, 10L})
    CHECK(displacement(st, Vec2(0, 0), n).norm() <= 1e-12);

  // Non-identity linear part is rejected.
  LiftedMap gen = make_map("zaslavsky_generator", {0.19, 1.69});
  CHECK_THROWS_AS(displacement(gen, Vec2(0, 0), 1), std::invalid_argument);
}

TEST_CASE("displacement is invariant under integer translation of the start") {
  // Representing z + v in floating point perturbs z by up to one ulp, and a
  // chaotic map amplifies that exponentially, so the horizon is kept short
  // for maps with large derivatives.
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> iv(-3, 3);
  for (const auto& m : builtin_maps()) {
    if (!m.homotopic_to_identity()) continue;
    long n = (m.label == "standard(6)") ? 2 : 10;
    for (int i = 0; i < 40; ++i) {
      Vec2 z(u(rng), u(rng));
      IntVec v(iv(rng), iv(rng));
      Vec2 a = displacement(m, z, n);
      Vec2 b = displacement(m, z + v.cast<double>(), n);
      CHECK((a - b).norm() <= 1e-7);
    }
  }
}

TEST_CASE("disk twist is the identity outside its support, exactly") {
  LiftedMap m = make_map("disk_twist", {0.5, 0.5, 0.2, 2.0});
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  int outside = 0;
  for (int i = 0; i < 500; ++i) {
    Vec2 z(u(rng), u(rng));
    Vec2 d = z - Vec2(0.5, 0.5);
    Vec2 local = d - Vec2(std::round(d.x()), std::round(d.y()));
    if (local.norm() < 0.2) continue;
    ++outside;
    CHECK(m.eval(z) == z);
  }
  CHECK(outside > 300);
}

TEST_CASE("power_map composes lifts and linear parts") {
  LiftedMap gen = make_map("zaslavsky_generator", {0.19, 1.69});
  LiftedMap gen4 = power_map(gen, 4);
  CHECK(gen4.homotopic_to_identity());
  LiftedMap z = make_map("zaslavsky", {0.19, 1.69});
  Vec2 p(0.37, -0.82);
  CHECK((gen4.eval(p) - z.eval(p)).norm() <= 1e-12);
}
