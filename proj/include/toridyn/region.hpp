#pragma once

#include <optional>
#include <string>
#include <vector>

#include "toridyn/map.hpp"
#include "toridyn/vec.hpp"

namespace toridyn {

/// Open subset of the torus as an R x R bitmap. Cell (i, j) is the square
/// [i/R, (i+1)/R] x [j/R, (j+1)/R].
struct GridRegion {
  int R = 0;
  std::vector<uint8_t> cells;  // row-major, index j*R + i

  GridRegion() = default;
  explicit GridRegion(int resolution);

  bool at(int i, int j) const { return cells[static_cast<size_t>(j) * R + i]; }
  void set(int i, int j, bool v = true) {
    cells[static_cast<size_t>(j) * R + i] = v ? 1 : 0;
  }
  int index(int i, int j) const { return j * R + i; }
  size_t count() const;
  bool empty() const { return count() == 0; }

  /// Cells whose centers lie within torus distance eps of p.
  static GridRegion ball(int R, const TorusPoint& p, double eps);

  /// Torus-wrapping dilation by one cell (8-neighborhood).
  GridRegion dilated() const;

  bool operator==(const GridRegion&) const = default;
};

/// Component labeling with per-cell covering-space offsets and per-component
/// homology subgroup H of Z^2 (rank 0, rank 1 with a primitive direction, or
/// rank 2).
struct LiftedLabeling {
  struct Component {
    int rank = 0;
    IntVec direction = IntVec::Zero();  // primitive, rank 1 only
    int size = 0;
    bool essential() const { return rank >= 1; }
  };

  int R = 0;
  std::vector<int> component;   // per cell, -1 when inactive
  std::vector<IntVec> offset;   // per cell, Z^2 translate relative to root
  std::vector<Component> comps;

  int component_count() const { return static_cast<int>(comps.size()); }
};

LiftedLabeling label_components(const GridRegion& region);

enum class RegionTag {
  inessential,
  essential_annular,
  essential_not_fully,
  fully_essential,
};

std::string to_string(RegionTag tag);

struct RegionClass {
  RegionTag tag = RegionTag::inessential;
  IntVec direction = IntVec::Zero();  // annular direction, when applicable
  LiftedLabeling labeling;
  bool essential() const { return tag != RegionTag::inessential; }
};

RegionClass region_class(const GridRegion& region);

/// Union of the region with the inessential components of its complement.
/// Idempotent.
GridRegion fill(const GridRegion& region);

/// Diameter of a lifted component. Unbounded (nullopt) for rank >= 1; for
/// rank 0 the exact diameter of the union of lifted closed cells.
std::optional<double> component_diameter(const GridRegion& region,
                                         const LiftedLabeling& labeling,
                                         int comp);

/// Directional variant D_v: extent of the projection of the lifted closed
/// cells onto v / |v|.
std::optional<double> component_diameter_along(const GridRegion& region,
                                               const LiftedLabeling& labeling,
                                               int comp, const IntVec& v);

/// Cell-transition digraph: successors of a cell are the cells whose
/// centers lie inside the filled quadrilateral of its four corner images,
/// plus the cell containing the image of the cell center. When the map has
/// an inverse, predecessor edges are estimated from the inverse the same
/// way and merged.
struct TransitionGraph {
  int R = 0;
  bool has_backward = false;
  // CSR adjacency over torus cells; forward and backward edge sets merged.
  std::vector<int> head;
  std::vector<int> adj;
};

TransitionGraph build_transition_graph(const LiftedMap& m, int R,
                                       int threads = 1);

struct OrbitRegionResult {
  GridRegion region;        // reachable set, dilated by one cell
  bool stabilized = false;  // frontier exhausted before the step budget
  int steps = 0;            // graph steps actually taken
  bool backward_included = true;
};

/// Forward-and-backward reachable set from the seed within N graph steps,
/// returned with a one-cell dilation collar. Monotone in N and in the seed.
OrbitRegionResult orbit_region(const TransitionGraph& graph,
                               const GridRegion& seed, int N);
OrbitRegionResult orbit_region(const LiftedMap& m, const GridRegion& seed,
                               int N, int threads = 1);

enum class PointVerdict { essential, inessential, undecided };

std::string to_string(PointVerdict v);

struct EssentialPointResult {
  PointVerdict verdict = PointVerdict::undecided;
  RegionClass region_class;
  GridRegion region;
  bool backward_included = true;
  std::optional<double> diameter;  // lifted diameter when inessential
};

/// Tests essentiality of a point at one scale: grows the orbit region of
/// ball(x, eps); essential iff the grown region is essential, inessential
/// iff it stabilizes while inessential. Requires eps >= 2/R.
EssentialPointResult essential_point_test(const LiftedMap& m,
                                          const TorusPoint& x, double eps,
                                          int N, int R, int threads = 1);
EssentialPointResult essential_point_test(const TransitionGraph& graph,
                                          const TorusPoint& x, double eps,
                                          int N);

struct IslandInfo {
  int id = 0;
  int cells = 0;
  double diameter = 0.0;  // lifted diameter D(U)
};

struct TorusClassification {
  int R = 0;
  double eps = 0.0;
  int N = 0;
  GridRegion essential_cells;
  GridRegion inessential_cells;
  GridRegion undecided_cells;
  std::vector<IslandInfo> islands;  // maximal inessential components
};

/// Classifies every cell as essential/inessential/undecided, sharing one
/// transition digraph, and lists the inessential islands with their lifted
/// diameters.
TorusClassification classify_torus(const LiftedMap& m, double eps, int N,
                                   int R, int threads = 1);

/// Independent essentiality oracle: BFS on the 3x3 unfolded patch. A
/// component is essential iff some unfolded component contains two cells
/// congruent mod R in distinct copies. Returns a per-cell verdict bitmap
/// (1 = the cell's component is essential), 0 on inactive cells.
std::vector<uint8_t> unfold_oracle(const GridRegion& region);

}  // namespace toridyn
