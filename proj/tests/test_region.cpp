#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "toridyn/map.hpp"
#include "toridyn/region.hpp"

using namespace toridyn;

namespace {

GridRegion full(int R) {
  GridRegion r(R);
  for (auto& c : r.cells) c = 1;
  return r;
}

GridRegion random_region(std::mt19937_64& rng, int R, double density) {
  GridRegion r(R);
  std::bernoulli_distribution coin(density);
  for (auto& c : r.cells) c = coin(rng) ? 1 : 0;
  return r;
}

bool subset(const GridRegion& a, const GridRegion& b) {
  for (size_t k = 0; k < a.cells.size(); ++k)
    if (a.cells[k] && !b.cells[k]) return false;
  return true;
}

// Sorted multiset of rank-0 component diameters, for shift-invariance checks.
std::vector<double> diameter_profile(const GridRegion& r) {
  LiftedLabeling lab = label_components(r);
  std::vector<double> out;
  for (int c = 0; c < lab.component_count(); ++c)
    if (auto d = component_diameter(r, lab, c)) out.push_back(*d);
  std::sort(out.begin(), out.end());
  return out;
}

GridRegion shifted(const GridRegion& r, int di, int dj) {
  GridRegion out(r.R);
  for (int j = 0; j < r.R; ++j)
    for (int i = 0; i < r.R; ++i)
      if (r.at(i, j)) out.set((i + di) % r.R, (j + dj) % r.R);
  return out;
}

}  // namespace

TEST_CASE("GridRegion basics") {
  CHECK_THROWS_AS(GridRegion(1), std::invalid_argument);
  GridRegion r(8);
  CHECK(r.empty());
  r.set(2, 3);
  CHECK(r.count() == 1);
  CHECK(r.at(2, 3));
  r.set(2, 3, false);
  CHECK(r.empty());

  GridRegion ball = GridRegion::ball(16, TorusPoint{0.5, 0.5}, 0.15);
  CHECK(ball.at(8, 8));
  CHECK_FALSE(ball.at(0, 0));
  // The ball is symmetric about its center cell.
  for (int j = 0; j < 16; ++j)
    for (int i = 0; i < 16; ++i)
      CHECK(ball.at(i, j) == ball.at(15 - i, 15 - j));

  // Wrapping ball at the corner.
  GridRegion wrap = GridRegion::ball(16, TorusPoint{0.0, 0.0}, 0.1);
  CHECK(wrap.at(0, 0));
  CHECK(wrap.at(15, 15));

  GridRegion one(8);
  one.set(0, 0);
  GridRegion d = one.dilated();
  CHECK(d.count() == 9);
  CHECK(d.at(7, 7));
  CHECK(d.at(1, 1));
  CHECK(d.at(0, 7));
}

TEST_CASE("component labeling ranks and directions") {
  // Full torus: one component of rank 2.
  LiftedLabeling lab = label_components(full(8));
  REQUIRE(lab.component_count() == 1);
  CHECK(lab.comps[0].rank == 2);
  CHECK(lab.comps[0].size == 64);

  // A single cell: rank 0.
  GridRegion one(8);
  one.set(3, 4);
  lab = label_components(one);
  REQUIRE(lab.component_count() == 1);
  CHECK(lab.comps[0].rank == 0);
  CHECK(lab.comps[0].size == 1);

  // A full row: rank 1 in direction (1, 0).
  GridRegion row(8);
  for (int i = 0; i < 8; ++i) row.set(i, 2);
  lab = label_components(row);
  REQUIRE(lab.component_count() == 1);
  CHECK(lab.comps[0].rank == 1);
  CHECK(lab.comps[0].direction == IntVec(1, 0));

  // A full column: rank 1 in direction (0, 1).
  GridRegion col(8);
  for (int j = 0; j < 8; ++j) col.set(5, j);
  lab = label_components(col);
  REQUIRE(lab.component_count() == 1);
  CHECK(lab.comps[0].rank == 1);
  CHECK(lab.comps[0].direction == IntVec(0, 1));

  // A wrapping diagonal band: rank 1 in direction (1, 1).
  GridRegion diag(8);
  for (int i = 0; i < 8; ++i) {
    diag.set(i, i);
    diag.set((i + 1) % 8, i);  // widen so the band is edge-connected
  }
  lab = label_components(diag);
  REQUIRE(lab.component_count() == 1);
  CHECK(lab.comps[0].rank == 1);
  CHECK(lab.comps[0].direction == IntVec(1, 1));

  // Two separate cells: two rank-0 components.
  GridRegion two(8);
  two.set(1, 1);
  two.set(5, 5);
  lab = label_components(two);
  CHECK(lab.component_count() == 2);
  CHECK(lab.comps[0].rank == 0);
  CHECK(lab.comps[1].rank == 0);

  // Row plus column: one component of rank 2.
  GridRegion cross(8);
  for (int k = 0; k < 8; ++k) {
    cross.set(k, 2);
    cross.set(5, k);
  }
  lab = label_components(cross);
  REQUIRE(lab.component_count() == 1);
  CHECK(lab.comps[0].rank == 2);
}

TEST_CASE("region classification") {
  CHECK(region_class(GridRegion(8)).tag == RegionTag::inessential);
  CHECK(region_class(full(8)).tag == RegionTag::fully_essential);

  GridRegion one(8);
  one.set(3, 3);
  CHECK(region_class(one).tag == RegionTag::inessential);

  GridRegion row(8);
  for (int i = 0; i < 8; ++i) row.set(i, 2);
  RegionClass rc = region_class(row);
  CHECK(rc.tag == RegionTag::essential_annular);
  CHECK(rc.direction == IntVec(1, 0));
  CHECK(rc.essential());

  // An extra far-away cell does not change annularity.
  GridRegion row_plus = row;
  row_plus.set(4, 6);
  CHECK(region_class(row_plus).tag == RegionTag::essential_annular);

  // Row plus column: complement is an inessential block, so fully essential.
  GridRegion cross(8);
  for (int k = 0; k < 8; ++k) {
    cross.set(k, 2);
    cross.set(5, k);
  }
  CHECK(region_class(cross).tag == RegionTag::fully_essential);

  // Two parallel rows: two essential components, not fully essential.
  GridRegion rows(8);
  for (int i = 0; i < 8; ++i) {
    rows.set(i, 1);
    rows.set(i, 5);
  }
  CHECK(region_class(rows).tag == RegionTag::essential_not_fully);
}

TEST_CASE("fill") {
  // A square ring swallows its interior hole.
  GridRegion ring(16);
  for (int k = 4; k <= 10; ++k) {
    ring.set(k, 4);
    ring.set(k, 10);
    ring.set(4, k);
    ring.set(10, k);
  }
  GridRegion filled = fill(ring);
  CHECK(filled.at(7, 7));
  CHECK(subset(ring, filled));
  CHECK_FALSE(filled.at(0, 0));  // the essential outside stays out
  CHECK(filled.count() == 7 * 7);
  CHECK(fill(filled) == filled);  // idempotent

  // A row's complement is essential, so nothing is added.
  GridRegion row(8);
  for (int i = 0; i < 8; ++i) row.set(i, 2);
  CHECK(fill(row) == row);

  // Filling the full torus is a no-op.
  CHECK(fill(full(8)) == full(8));
}

TEST_CASE("component diameters") {
  const int R = 16;
  // Single cell: the closed cell has diameter sqrt(2)/R.
  GridRegion one(R);
  one.set(3, 3);
  LiftedLabeling lab = label_components(one);
  CHECK(*component_diameter(one, lab, 0) ==
        doctest::Approx(std::sqrt(2.0) / R).epsilon(1e-12));

  // A run of k cells: sqrt(k^2 + 1)/R.
  for (int k : {2, 3, 5}) {
    GridRegion run(R);
    for (int i = 0; i < k; ++i) run.set(2 + i, 7);
    lab = label_components(run);
    CHECK(*component_diameter(run, lab, 0) ==
          doctest::Approx(std::sqrt(double(k) * k + 1) / R).epsilon(1e-12));
  }

  // A run crossing the seam has the same diameter as an interior run.
  GridRegion seam(R);
  seam.set(R - 1, 0);
  seam.set(0, 0);
  seam.set(1, 0);
  lab = label_components(seam);
  CHECK(*component_diameter(seam, lab, 0) ==
        doctest::Approx(std::sqrt(10.0) / R).epsilon(1e-12));

  // L-tromino: diameter realized between the two arm tips, 2*sqrt(2)/R.
  GridRegion ell(R);
  ell.set(4, 4);
  ell.set(5, 4);
  ell.set(4, 5);
  lab = label_components(ell);
  CHECK(*component_diameter(ell, lab, 0) ==
        doctest::Approx(2.0 * std::sqrt(2.0) / R).epsilon(1e-12));

  // Essential components have no finite diameter.
  GridRegion row(R);
  for (int i = 0; i < R; ++i) row.set(i, 2);
  lab = label_components(row);
  CHECK_FALSE(component_diameter(row, lab, 0).has_value());

  // Directional extent of a 3x1 run: 3/R along (1,0), 1/R along (0,1),
  // projection of the bounding corners along (1,1).
  GridRegion run(R);
  for (int i = 0; i < 3; ++i) run.set(2 + i, 7);
  lab = label_components(run);
  CHECK(*component_diameter_along(run, lab, 0, IntVec(1, 0)) ==
        doctest::Approx(3.0 / R).epsilon(1e-12));
  CHECK(*component_diameter_along(run, lab, 0, IntVec(0, 1)) ==
        doctest::Approx(1.0 / R).epsilon(1e-12));
  CHECK(*component_diameter_along(run, lab, 0, IntVec(1, 1)) ==
        doctest::Approx(4.0 / (R * std::sqrt(2.0))).epsilon(1e-12));
  CHECK_THROWS_AS(component_diameter_along(run, lab, 0, IntVec(0, 0)),
                  std::invalid_argument);
}

TEST_CASE("diameters are invariant under torus shifts") {
  std::mt19937_64 rng(71);
  std::uniform_int_distribution<int> sh(0, 15);
  for (int trial = 0; trial < 30; ++trial) {
    GridRegion r = random_region(rng, 16, 0.3);
    auto base = diameter_profile(r);
    GridRegion s = shifted(r, sh(rng), sh(rng));
    auto moved = diameter_profile(s);
    REQUIRE(base.size() == moved.size());
    for (size_t i = 0; i < base.size(); ++i)
      CHECK(base[i] == doctest::Approx(moved[i]).epsilon(1e-12));
  }
}

TEST_CASE("essentiality agrees with the unfolding oracle on random bitmaps") {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> dens(0.25, 0.7);
  for (int R : {16, 32, 64}) {
    for (int trial = 0; trial < 40; ++trial) {
      GridRegion r = random_region(rng, R, dens(rng));
      LiftedLabeling lab = label_components(r);
      std::vector<uint8_t> oracle = unfold_oracle(r);
      for (size_t k = 0; k < r.cells.size(); ++k) {
        if (!r.cells[k]) {
          CHECK(lab.component[k] == -1);
          CHECK(oracle[k] == 0);
          continue;
        }
        bool ess = lab.comps[lab.component[k]].essential();
        CHECK(ess == (oracle[k] != 0));
      }
    }
  }
}

TEST_CASE("transition graph of the identity is reflexive only") {
  LiftedMap id = make_map("identity", {});
  TransitionGraph g = build_transition_graph(id, 8);
  CHECK(g.R == 8);
  CHECK(g.has_backward);
  for (int c = 0; c < 64; ++c) {
    REQUIRE(g.head[c + 1] - g.head[c] == 1);
    CHECK(g.adj[g.head[c]] == c);
  }
}

TEST_CASE("transition graph of a quarter translation permutes cells") {
  LiftedMap tr = make_map("translation", {0.25, 0.0});
  TransitionGraph g = build_transition_graph(tr, 8);
  // Cell images align with the grid: one forward target, plus the backward
  // edge from the inverse, both exact.
  for (int j = 0; j < 8; ++j)
    for (int i = 0; i < 8; ++i) {
      int c = j * 8 + i;
      std::vector<int> exp = {j * 8 + (i + 2) % 8, j * 8 + (i + 6) % 8};
      std::sort(exp.begin(), exp.end());
      REQUIRE(g.head[c + 1] - g.head[c] == 2);
      CHECK(g.adj[g.head[c]] == exp[0]);
      CHECK(g.adj[g.head[c] + 1] == exp[1]);
    }
}

TEST_CASE("orbit region of the identity is the dilated seed") {
  LiftedMap id = make_map("identity", {});
  GridRegion seed(16);
  seed.set(5, 5);
  OrbitRegionResult res = orbit_region(id, seed, 50);
  CHECK(res.stabilized);
  CHECK(res.backward_included);
  CHECK(res.region == seed.dilated());
  CHECK(res.region.count() == 9);

  CHECK_THROWS_AS(orbit_region(id, GridRegion(16), 10), std::invalid_argument);
  GridRegion wrong(8);
  wrong.set(0, 0);
  TransitionGraph g = build_transition_graph(id, 16);
  CHECK_THROWS_AS(orbit_region(g, wrong, 10), std::invalid_argument);
}

TEST_CASE("orbit region is monotone in the step budget and the seed") {
  LiftedMap z = make_map("zaslavsky", {0.19, 1.69});
  TransitionGraph g = build_transition_graph(z, 32);
  GridRegion seed(32);
  seed.set(3, 17);
  OrbitRegionResult r5 = orbit_region(g, seed, 5);
  OrbitRegionResult r10 = orbit_region(g, seed, 10);
  CHECK(subset(r5.region, r10.region));
  GridRegion bigger = seed;
  bigger.set(20, 20);
  OrbitRegionResult rbig = orbit_region(g, bigger, 5);
  CHECK(subset(r5.region, rbig.region));
}

TEST_CASE("essential point test") {
  // Identity: every point is inessential, with a ball-sized region.
  LiftedMap id = make_map("identity", {});
  EssentialPointResult r =
      essential_point_test(id, TorusPoint{0.3, 0.7}, 0.15, 50, 32);
  CHECK(r.verdict == PointVerdict::inessential);
  REQUIRE(r.diameter.has_value());
  CHECK(*r.diameter < 0.5);
  CHECK(to_string(r.verdict) == "inessential");

  // An irrational translation spreads any ball over an essential annulus.
  LiftedMap tr = make_map("translation", {0.618033988749895, 0.0});
  r = essential_point_test(tr, TorusPoint{0.5, 0.5}, 0.1, 200, 32);
  CHECK(r.verdict == PointVerdict::essential);
  CHECK(r.region_class.essential());
  CHECK(r.region_class.direction == IntVec(1, 0));

  // eps below the resolution floor is rejected.
  CHECK_THROWS_AS(essential_point_test(id, TorusPoint{0.5, 0.5}, 0.01, 10, 32),
                  std::invalid_argument);
}

TEST_CASE("classify_torus on the identity marks everything inessential") {
  LiftedMap id = make_map("identity", {});
  TorusClassification cls = classify_torus(id, 0.1, 50, 32);
  CHECK(cls.R == 32);
  CHECK(cls.essential_cells.empty());
  CHECK(cls.undecided_cells.empty());
  CHECK(cls.inessential_cells.count() == 32 * 32);
  // One island spanning the whole torus bitmap is impossible: the
  // inessential bitmap is the full torus, which is essential as a region,
  // so no island is reported for it.
  CHECK(cls.islands.empty());
}

TEST_CASE("classify_torus separates a twisted disk from a still background") {
  // The disk twist stirs only the disk; at this resolution its cells join
  // one orbit component, while far cells stay put. Everything is
  // inessential; the census sees small islands.
  LiftedMap dt = make_map("disk_twist", {0.5, 0.5, 0.2, 1.0});
  TorusClassification cls = classify_torus(dt, 0.1, 400, 32);
  CHECK(cls.essential_cells.empty());
  for (const auto& isl : cls.islands) CHECK(isl.diameter < 1.0);

  // An irrational translation makes every point essential.
  LiftedMap tr = make_map("translation", {0.618033988749895, 0.0});
  cls = classify_torus(tr, 0.1, 400, 32);
  CHECK(cls.essential_cells.count() == 32 * 32);
  CHECK(cls.islands.empty());

  CHECK_THROWS_AS(classify_torus(tr, 0.01, 10, 32), std::invalid_argument);
}

TEST_CASE("region tags have stable names") {
  CHECK(to_string(RegionTag::inessential) == "inessential");
  CHECK(to_string(RegionTag::essential_annular) == "essential_annular");
  CHECK(to_string(RegionTag::essential_not_fully) == "essential_not_fully");
  CHECK(to_string(RegionTag::fully_essential) == "fully_essential");
}
