#include "toridyn/region.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <map>
#include <numeric>

#include "toridyn/parallel.hpp"
#include "toridyn/rotation.hpp"

namespace toridyn {

namespace {

IntVec primitive(IntVec w) {
  int g = std::gcd(std::abs(w.x()), std::abs(w.y()));
  if (g > 1) w /= g;
  if (w.x() < 0 || (w.x() == 0 && w.y() < 0)) w = -w;
  return w;
}

int cross_i(const IntVec& a, const IntVec& b) {
  return a.x() * b.y() - a.y() * b.x();
}

// Subgroup of Z^2 generated by accumulated cycle offsets, kept in canonical
// form: rank plus a primitive generator when rank 1.
struct Subgroup {
  int rank = 0;
  IntVec dir = IntVec::Zero();

  void add(const IntVec& w) {
    if (w == IntVec::Zero() || rank == 2) return;
    if (rank == 0) {
      dir = primitive(w);
      rank = 1;
    } else if (cross_i(dir, w) != 0) {
      rank = 2;
      dir = IntVec::Zero();
    }
  }
  void merge(const Subgroup& o) {
    if (o.rank >= 1) add(o.rank == 2 ? IntVec(1, 0) : o.dir);
    if (o.rank == 2) add(IntVec(0, 1));
  }
};

// Union-find over cells carrying the Z^2 offset of each cell's lift
// relative to its root's lift.
struct OffsetUnionFind {
  std::vector<int> parent;
  std::vector<IntVec> off;  // offset relative to parent
  std::vector<Subgroup> group;

  explicit OffsetUnionFind(size_t n)
      : parent(n), off(n, IntVec::Zero()), group(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }

  int find(int x, IntVec& total) {
    int root = x;
    IntVec acc = IntVec::Zero();
    while (parent[root] != root) {
      acc += off[root];
      root = parent[root];
    }
    // Path compression, repointing everything at the root.
    int cur = x;
    IntVec rem = acc;
    while (parent[cur] != root) {
      int next = parent[cur];
      IntVec step = off[cur];
      parent[cur] = root;
      off[cur] = rem;
      rem -= step;
      cur = next;
    }
    total = acc;
    return root;
  }

  // Declares lift(b) = lift(a) + w.
  void unite(int a, int b, const IntVec& w) {
    IntVec oa, ob;
    int ra = find(a, oa);
    int rb = find(b, ob);
    if (ra == rb) {
      group[ra].add(oa + w - ob);
      return;
    }
    parent[rb] = ra;
    off[rb] = oa + w - ob;
    group[ra].merge(group[rb]);
  }
};

bool all_inessential(const LiftedLabeling& lab) {
  for (const auto& c : lab.comps)
    if (c.essential()) return false;
  return true;
}

GridRegion complement(const GridRegion& region) {
  GridRegion out(region.R);
  for (size_t k = 0; k < region.cells.size(); ++k)
    out.cells[k] = region.cells[k] ? 0 : 1;
  return out;
}

int mod(int a, int m) {
  int r = a % m;
  return r < 0 ? r + m : r;
}

// Rasterizes the estimated image of a cell: torus cells whose centers lie
// inside the filled quadrilateral of the corner images, plus the cell
// containing the image of the cell center (so thin or degenerate images
// still produce a successor). Rasterizing by cell centers rather than by
// positive-area overlap keeps the estimate from inflating by a cell per
// step, which is what lets exactly invariant annuli stabilize.
void rasterize_cell_image(const LiftedMap& m, int R, int i, int j,
                          std::vector<int>* out) {
  const double inv = 1.0 / R;
  Vec2 pts[4] = {
      m.eval(Vec2(i * inv, j * inv)),
      m.eval(Vec2((i + 1) * inv, j * inv)),
      m.eval(Vec2((i + 1) * inv, (j + 1) * inv)),
      m.eval(Vec2(i * inv, (j + 1) * inv)),
  };
  Vec2 cimg = m.eval(Vec2((i + 0.5) * inv, (j + 0.5) * inv));
  out->push_back(mod(static_cast<int>(std::floor(cimg.y() * R)), R) * R +
                 mod(static_cast<int>(std::floor(cimg.x() * R)), R));

  ConvexPolygon hull = convex_hull(std::span<const Vec2>(pts, 4));
  if (hull.vertices.size() < 3) return;
  double minx = pts[0].x(), maxx = pts[0].x();
  double miny = pts[0].y(), maxy = pts[0].y();
  for (const Vec2& p : pts) {
    minx = std::min(minx, p.x());
    maxx = std::max(maxx, p.x());
    miny = std::min(miny, p.y());
    maxy = std::max(maxy, p.y());
  }
  const double tol = 1e-12;
  int i0 = static_cast<int>(std::floor(minx * R));
  int i1 = static_cast<int>(std::floor(maxx * R));
  int j0 = static_cast<int>(std::floor(miny * R));
  int j1 = static_cast<int>(std::floor(maxy * R));
  const size_t nv = hull.vertices.size();
  for (int pj = j0; pj <= j1; ++pj)
    for (int pi = i0; pi <= i1; ++pi) {
      Vec2 c((pi + 0.5) * inv, (pj + 0.5) * inv);
      bool inside = true;
      for (size_t a = 0; a < nv && inside; ++a) {
        const Vec2& p = hull.vertices[a];
        const Vec2& q = hull.vertices[(a + 1) % nv];
        if ((q.x() - p.x()) * (c.y() - p.y()) -
                (q.y() - p.y()) * (c.x() - p.x()) <
            -tol)
          inside = false;
      }
      if (inside) out->push_back(mod(pj, R) * R + mod(pi, R));
    }
}

}  // namespace

GridRegion::GridRegion(int resolution) : R(resolution) {
  if (resolution < 2)
    throw std::invalid_argument("GridRegion: resolution must be >= 2");
  cells.assign(static_cast<size_t>(R) * R, 0);
}

size_t GridRegion::count() const {
  size_t n = 0;
  for (uint8_t c : cells) n += c;
  return n;
}

GridRegion GridRegion::ball(int R, const TorusPoint& p, double eps) {
  GridRegion out(R);
  for (int j = 0; j < R; ++j)
    for (int i = 0; i < R; ++i) {
      TorusPoint c{(i + 0.5) / R, (j + 0.5) / R};
      if (torus_distance(c, p) <= eps) out.set(i, j);
    }
  return out;
}

GridRegion GridRegion::dilated() const {
  GridRegion out(R);
  for (int j = 0; j < R; ++j)
    for (int i = 0; i < R; ++i) {
      if (!at(i, j)) continue;
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di)
          out.set(mod(i + di, R), mod(j + dj, R));
    }
  return out;
}

LiftedLabeling label_components(const GridRegion& region) {
  const int R = region.R;
  const size_t n = region.cells.size();
  OffsetUnionFind uf(n);
  for (int j = 0; j < R; ++j)
    for (int i = 0; i < R; ++i) {
      if (!region.at(i, j)) continue;
      int a = region.index(i, j);
      // Right neighbor; wrapping adjacency carries offset e1.
      {
        int ni = i + 1, wrap = 0;
        if (ni == R) {
          ni = 0;
          wrap = 1;
        }
        if (region.at(ni, j)) uf.unite(a, region.index(ni, j), IntVec(wrap, 0));
      }
      // Upper neighbor; wrapping adjacency carries offset e2.
      {
        int nj = j + 1, wrap = 0;
        if (nj == R) {
          nj = 0;
          wrap = 1;
        }
        if (region.at(i, nj)) uf.unite(a, region.index(i, nj), IntVec(0, wrap));
      }
    }

  LiftedLabeling lab;
  lab.R = R;
  lab.component.assign(n, -1);
  lab.offset.assign(n, IntVec::Zero());
  std::vector<int> root_to_comp(n, -1);
  for (size_t k = 0; k < n; ++k) {
    if (!region.cells[k]) continue;
    IntVec total;
    int root = uf.find(static_cast<int>(k), total);
    if (root_to_comp[root] < 0) {
      root_to_comp[root] = static_cast<int>(lab.comps.size());
      const Subgroup& g = uf.group[root];
      lab.comps.push_back({g.rank, g.dir, 0});
    }
    int c = root_to_comp[root];
    lab.component[k] = c;
    lab.offset[k] = total;
    lab.comps[c].size += 1;
  }
  return lab;
}

std::string to_string(RegionTag tag) {
  switch (tag) {
    case RegionTag::inessential: return "inessential";
    case RegionTag::essential_annular: return "essential_annular";
    case RegionTag::essential_not_fully: return "essential_not_fully";
    case RegionTag::fully_essential: return "fully_essential";
  }
  return "?";
}

std::string to_string(PointVerdict v) {
  switch (v) {
    case PointVerdict::essential: return "essential";
    case PointVerdict::inessential: return "inessential";
    case PointVerdict::undecided: return "undecided";
  }
  return "?";
}

RegionClass region_class(const GridRegion& region) {
  RegionClass out;
  out.labeling = label_components(region);
  if (region.empty() || all_inessential(out.labeling)) {
    out.tag = RegionTag::inessential;
    return out;
  }
  GridRegion comp = complement(region);
  if (comp.empty()) {
    out.tag = RegionTag::fully_essential;
    return out;
  }
  LiftedLabeling comp_lab = label_components(comp);
  if (all_inessential(comp_lab)) {
    out.tag = RegionTag::fully_essential;
    return out;
  }
  int essential_comps = 0;
  const LiftedLabeling::Component* the_one = nullptr;
  for (const auto& c : out.labeling.comps)
    if (c.essential()) {
      ++essential_comps;
      the_one = &c;
    }
  if (essential_comps == 1 && the_one->rank == 1) {
    out.tag = RegionTag::essential_annular;
    out.direction = the_one->direction;
  } else {
    out.tag = RegionTag::essential_not_fully;
  }
  return out;
}

GridRegion fill(const GridRegion& region) {
  GridRegion comp = complement(region);
  LiftedLabeling lab = label_components(comp);
  GridRegion out = region;
  for (size_t k = 0; k < comp.cells.size(); ++k) {
    int c = lab.component[k];
    if (c >= 0 && lab.comps[c].rank == 0) out.cells[k] = 1;
  }
  return out;
}

std::optional<double> component_diameter(const GridRegion& region,
                                         const LiftedLabeling& labeling,
                                         int comp) {
  if (labeling.comps[comp].rank >= 1) return std::nullopt;
  const int R = region.R;
  std::vector<Vec2> corners;
  for (int j = 0; j < R; ++j)
    for (int i = 0; i < R; ++i) {
      size_t k = static_cast<size_t>(j) * R + i;
      if (labeling.component[k] != comp) continue;
      IntVec o = labeling.offset[k];
      double x = static_cast<double>(i) / R + o.x();
      double y = static_cast<double>(j) / R + o.y();
      double d = 1.0 / R;
      corners.emplace_back(x, y);
      corners.emplace_back(x + d, y);
      corners.emplace_back(x, y + d);
      corners.emplace_back(x + d, y + d);
    }
  return polygon_diameter(convex_hull(corners));
}

std::optional<double> component_diameter_along(const GridRegion& region,
                                               const LiftedLabeling& labeling,
                                               int comp, const IntVec& v) {
  if (labeling.comps[comp].rank >= 1) return std::nullopt;
  if (v == IntVec::Zero())
    throw std::invalid_argument("component_diameter_along: zero direction");
  Vec2 u = v.cast<double>().normalized();
  const int R = region.R;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int j = 0; j < R; ++j)
    for (int i = 0; i < R; ++i) {
      size_t k = static_cast<size_t>(j) * R + i;
      if (labeling.component[k] != comp) continue;
      IntVec o = labeling.offset[k];
      double d = 1.0 / R;
      for (int cy = 0; cy <= 1; ++cy)
        for (int cx = 0; cx <= 1; ++cx) {
          double t = u.dot(Vec2(static_cast<double>(i) / R + o.x() + cx * d,
                                static_cast<double>(j) / R + o.y() + cy * d));
          lo = std::min(lo, t);
          hi = std::max(hi, t);
        }
    }
  return hi - lo;
}

TransitionGraph build_transition_graph(const LiftedMap& m, int R,
                                       int threads) {
  if (R < 2)
    throw std::invalid_argument("build_transition_graph: R must be >= 2");
  const size_t n = static_cast<size_t>(R) * R;
  std::vector<std::vector<int>> targets(n);
  parallel_for(n, threads, [&](size_t k) {
    int i = static_cast<int>(k) % R;
    int j = static_cast<int>(k) / R;
    rasterize_cell_image(m, R, i, j, &targets[k]);
    if (m.has_inverse()) {
      LiftedMap inv;
      inv.eval = m.inverse_eval;
      rasterize_cell_image(inv, R, i, j, &targets[k]);
    }
    std::sort(targets[k].begin(), targets[k].end());
    targets[k].erase(std::unique(targets[k].begin(), targets[k].end()),
                     targets[k].end());
  });
  TransitionGraph g;
  g.R = R;
  g.has_backward = m.has_inverse();
  g.head.resize(n + 1);
  g.head[0] = 0;
  for (size_t k = 0; k < n; ++k)
    g.head[k + 1] = g.head[k] + static_cast<int>(targets[k].size());
  g.adj.resize(g.head[n]);
  for (size_t k = 0; k < n; ++k)
    std::copy(targets[k].begin(), targets[k].end(), g.adj.begin() + g.head[k]);
  return g;
}

OrbitRegionResult orbit_region(const TransitionGraph& graph,
                               const GridRegion& seed, int N) {
  if (seed.R != graph.R)
    throw std::invalid_argument("orbit_region: resolution mismatch");
  if (seed.empty()) throw std::invalid_argument("orbit_region: empty seed");
  GridRegion visited(graph.R);
  std::vector<int> frontier;
  for (size_t k = 0; k < seed.cells.size(); ++k)
    if (seed.cells[k]) {
      visited.cells[k] = 1;
      frontier.push_back(static_cast<int>(k));
    }
  OrbitRegionResult res;
  res.backward_included = graph.has_backward;
  std::vector<int> next;
  int step = 0;
  while (step < N && !frontier.empty()) {
    next.clear();
    for (int c : frontier)
      for (int e = graph.head[c]; e < graph.head[c + 1]; ++e) {
        int t = graph.adj[e];
        if (!visited.cells[t]) {
          visited.cells[t] = 1;
          next.push_back(t);
        }
      }
    frontier.swap(next);
    ++step;
  }
  res.stabilized = frontier.empty();
  res.steps = step;
  res.region = visited.dilated();
  return res;
}

OrbitRegionResult orbit_region(const LiftedMap& m, const GridRegion& seed,
                               int N, int threads) {
  return orbit_region(build_transition_graph(m, seed.R, threads), seed, N);
}

EssentialPointResult essential_point_test(const TransitionGraph& graph,
                                          const TorusPoint& x, double eps,
                                          int N) {
  const int R = graph.R;
  if (eps < 2.0 / R)
    throw std::invalid_argument("essential_point_test: eps must be >= 2/R");
  GridRegion seed = GridRegion::ball(R, x, eps);
  GridRegion visited(R);
  std::vector<int> frontier;
  for (size_t k = 0; k < seed.cells.size(); ++k)
    if (seed.cells[k]) {
      visited.cells[k] = 1;
      frontier.push_back(static_cast<int>(k));
    }
  EssentialPointResult res;
  res.backward_included = graph.has_backward;
  std::vector<int> next;
  int step = 0;
  auto classify_now = [&]() {
    res.region = visited.dilated();
    res.region_class = region_class(res.region);
  };
  while (step < N && !frontier.empty()) {
    next.clear();
    for (int c : frontier)
      for (int e = graph.head[c]; e < graph.head[c + 1]; ++e) {
        int t = graph.adj[e];
        if (!visited.cells[t]) {
          visited.cells[t] = 1;
          next.push_back(t);
        }
      }
    frontier.swap(next);
    ++step;
    if (step % 8 == 0 && !frontier.empty()) {
      classify_now();
      if (res.region_class.essential()) {
        res.verdict = PointVerdict::essential;
        return res;
      }
    }
  }
  classify_now();
  if (res.region_class.essential()) {
    res.verdict = PointVerdict::essential;
  } else if (frontier.empty()) {
    res.verdict = PointVerdict::inessential;
    double dia = 0.0;
    for (int c = 0; c < res.region_class.labeling.component_count(); ++c)
      if (auto d = component_diameter(res.region, res.region_class.labeling, c))
        dia = std::max(dia, *d);
    res.diameter = dia;
  } else {
    res.verdict = PointVerdict::undecided;
  }
  return res;
}

EssentialPointResult essential_point_test(const LiftedMap& m,
                                          const TorusPoint& x, double eps,
                                          int N, int R, int threads) {
  return essential_point_test(build_transition_graph(m, R, threads), x, eps, N);
}

TorusClassification classify_torus(const LiftedMap& m, double eps, int N,
                                   int R, int threads) {
  if (eps < 2.0 / R)
    throw std::invalid_argument("classify_torus: eps must be >= 2/R");
  TransitionGraph graph = build_transition_graph(m, R, threads);
  const size_t n = static_cast<size_t>(R) * R;

  // Orbit components: weakly connected components of the transition graph.
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (size_t c = 0; c < n; ++c)
    for (int e = graph.head[c]; e < graph.head[c + 1]; ++e) {
      int ra = find(static_cast<int>(c)), rb = find(graph.adj[e]);
      if (ra != rb) parent[rb] = ra;
    }
  std::vector<int> orbit_comp(n, -1);
  int n_orbit = 0;
  for (size_t k = 0; k < n; ++k) {
    int r = find(static_cast<int>(k));
    if (orbit_comp[r] < 0) orbit_comp[r] = n_orbit++;
  }
  std::vector<int> cell_orbit(n);
  for (size_t k = 0; k < n; ++k)
    cell_orbit[k] = orbit_comp[find(static_cast<int>(k))];

  // Essentiality of each orbit component, via the lifted spatial union-find
  // restricted to cells of the same component.
  OffsetUnionFind spatial(n);
  for (int j = 0; j < R; ++j)
    for (int i = 0; i < R; ++i) {
      int a = j * R + i;
      int ni = (i + 1) % R;
      int b = j * R + ni;
      if (cell_orbit[a] == cell_orbit[b])
        spatial.unite(a, b, IntVec(ni == 0 ? 1 : 0, 0));
      int nj = (j + 1) % R;
      int b2 = nj * R + i;
      if (cell_orbit[a] == cell_orbit[b2])
        spatial.unite(a, b2, IntVec(0, nj == 0 ? 1 : 0));
    }
  std::vector<uint8_t> orbit_essential(n_orbit, 0);
  for (size_t k = 0; k < n; ++k) {
    IntVec tmp;
    int root = spatial.find(static_cast<int>(k), tmp);
    if (spatial.group[root].rank >= 1) orbit_essential[cell_orbit[k]] = 1;
  }

  // Step eccentricity of each orbit component (one BFS per component),
  // used to decide whether the component stabilizes within the N budget.
  std::vector<int> orbit_ecc(n_orbit, 0);
  {
    std::vector<int> dist(n, -1);
    std::vector<int> first(n_orbit, -1);
    for (size_t k = 0; k < n; ++k)
      if (first[cell_orbit[k]] < 0) first[cell_orbit[k]] = static_cast<int>(k);
    std::deque<int> queue;
    for (int c = 0; c < n_orbit; ++c) {
      int s = first[c];
      dist[s] = 0;
      queue.push_back(s);
      int ecc = 0;
      while (!queue.empty()) {
        int cur = queue.front();
        queue.pop_front();
        ecc = std::max(ecc, dist[cur]);
        for (int e = graph.head[cur]; e < graph.head[cur + 1]; ++e) {
          int t = graph.adj[e];
          if (dist[t] < 0) {
            dist[t] = dist[cur] + 1;
            queue.push_back(t);
          }
        }
      }
      orbit_ecc[c] = ecc;
    }
  }

  // Ball stencil: center offsets within eps.
  std::vector<std::pair<int, int>> stencil;
  int rad = static_cast<int>(std::ceil(eps * R));
  for (int dj = -rad; dj <= rad; ++dj)
    for (int di = -rad; di <= rad; ++di)
      if (std::sqrt(double(di) * di + double(dj) * dj) / R <= eps)
        stencil.emplace_back(di, dj);

  // Cells of each non-essential orbit component, for union-region checks.
  std::vector<std::vector<int>> comp_cells(n_orbit);
  for (size_t k = 0; k < n; ++k)
    if (!orbit_essential[cell_orbit[k]])
      comp_cells[cell_orbit[k]].push_back(static_cast<int>(k));

  // A ball seed reaches the union of the orbit components meeting it; that
  // union can be essential even when every single component is not (e.g.
  // interleaved cosets of a discretized irrational translation), so the
  // union is tested with its own lifted union-find. Verdicts are memoized
  // per component set.
  std::map<std::vector<int>, uint8_t> union_verdict;  // 1 = essential
  std::vector<int> local_id(n, -1);
  auto union_essential = [&](const std::vector<int>& comps) -> bool {
    auto it = union_verdict.find(comps);
    if (it != union_verdict.end()) return it->second != 0;
    std::vector<int> cells;
    for (int c : comps)
      cells.insert(cells.end(), comp_cells[c].begin(), comp_cells[c].end());
    std::sort(cells.begin(), cells.end());
    for (size_t a = 0; a < cells.size(); ++a) local_id[cells[a]] = static_cast<int>(a);
    OffsetUnionFind uf(cells.size());
    for (int cell : cells) {
      int i = cell % R, j = cell / R;
      int ni = (i + 1) % R;
      int right = j * R + ni;
      if (local_id[right] >= 0)
        uf.unite(local_id[cell], local_id[right], IntVec(ni == 0 ? 1 : 0, 0));
      int nj = (j + 1) % R;
      int up = nj * R + i;
      if (local_id[up] >= 0)
        uf.unite(local_id[cell], local_id[up], IntVec(0, nj == 0 ? 1 : 0));
    }
    bool ess = false;
    for (size_t a = 0; a < cells.size() && !ess; ++a) {
      IntVec tmp;
      int root = uf.find(static_cast<int>(a), tmp);
      if (uf.group[root].rank >= 1) ess = true;
    }
    for (int cell : cells) local_id[cell] = -1;
    union_verdict.emplace(comps, ess ? 1 : 0);
    return ess;
  };

  TorusClassification out;
  out.R = R;
  out.eps = eps;
  out.N = N;
  out.essential_cells = GridRegion(R);
  out.inessential_cells = GridRegion(R);
  out.undecided_cells = GridRegion(R);
  std::vector<int> comps;
  for (int j = 0; j < R; ++j)
    for (int i = 0; i < R; ++i) {
      bool ess = false, undecided = false;
      comps.clear();
      for (auto [di, dj] : stencil) {
        int c = cell_orbit[static_cast<size_t>(mod(j + dj, R)) * R +
                           mod(i + di, R)];
        if (orbit_essential[c]) {
          ess = true;
          break;
        }
        if (orbit_ecc[c] > N) undecided = true;
        comps.push_back(c);
      }
      if (!ess) {
        std::sort(comps.begin(), comps.end());
        comps.erase(std::unique(comps.begin(), comps.end()), comps.end());
        ess = union_essential(comps);
      }
      if (ess)
        out.essential_cells.set(i, j);
      else if (undecided)
        out.undecided_cells.set(i, j);
      else
        out.inessential_cells.set(i, j);
    }

  if (!out.inessential_cells.empty()) {
    LiftedLabeling lab = label_components(out.inessential_cells);
    for (int c = 0; c < lab.component_count(); ++c) {
      if (lab.comps[c].rank != 0) continue;
      auto d = component_diameter(out.inessential_cells, lab, c);
      out.islands.push_back({c, lab.comps[c].size, d.value_or(0.0)});
    }
  }
  return out;
}

std::vector<uint8_t> unfold_oracle(const GridRegion& region) {
  const int R = region.R;
  const size_t n = region.cells.size();

  // Torus components by plain BFS (independent of the lifted labeling).
  std::vector<int> torus_comp(n, -1);
  int n_comp = 0;
  std::deque<int> queue;
  for (size_t s = 0; s < n; ++s) {
    if (!region.cells[s] || torus_comp[s] >= 0) continue;
    torus_comp[s] = n_comp;
    queue.push_back(static_cast<int>(s));
    while (!queue.empty()) {
      int cur = queue.front();
      queue.pop_front();
      int i = cur % R, j = cur / R;
      const int ni[4] = {mod(i + 1, R), mod(i - 1, R), i, i};
      const int nj[4] = {j, j, mod(j + 1, R), mod(j - 1, R)};
      for (int d = 0; d < 4; ++d) {
        int t = nj[d] * R + ni[d];
        if (region.cells[t] && torus_comp[t] < 0) {
          torus_comp[t] = n_comp;
          queue.push_back(t);
        }
      }
    }
    ++n_comp;
  }

  // Components of the 3x3 unfolded patch, without wrapping.
  const int W = 3 * R;
  std::vector<int> ucomp(static_cast<size_t>(W) * W, -1);
  auto active = [&](int i, int j) { return region.at(i % R, j % R) != 0; };
  int n_ucomp = 0;
  for (int js = 0; js < W; ++js)
    for (int is = 0; is < W; ++is) {
      size_t s = static_cast<size_t>(js) * W + is;
      if (!active(is, js) || ucomp[s] >= 0) continue;
      ucomp[s] = n_ucomp;
      queue.push_back(static_cast<int>(s));
      while (!queue.empty()) {
        int cur = queue.front();
        queue.pop_front();
        int i = cur % W, j = cur / W;
        const int di[4] = {1, -1, 0, 0};
        const int dj[4] = {0, 0, 1, -1};
        for (int d = 0; d < 4; ++d) {
          int ii = i + di[d], jj = j + dj[d];
          if (ii < 0 || ii >= W || jj < 0 || jj >= W) continue;
          size_t t = static_cast<size_t>(jj) * W + ii;
          if (active(ii, jj) && ucomp[t] < 0) {
            ucomp[t] = n_ucomp;
            queue.push_back(static_cast<int>(t));
          }
        }
      }
      ++n_ucomp;
    }

  // A component is essential iff two distinct copies of the same torus cell
  // land in one unfolded component.
  std::vector<uint8_t> comp_essential(n_comp, 0);
  for (int j = 0; j < R; ++j)
    for (int i = 0; i < R; ++i) {
      if (!region.at(i, j)) continue;
      int ids[9];
      int cnt = 0;
      for (int cy = 0; cy < 3; ++cy)
        for (int cx = 0; cx < 3; ++cx)
          ids[cnt++] = ucomp[static_cast<size_t>(cy * R + j) * W + cx * R + i];
      bool dup = false;
      for (int a = 0; a < 9 && !dup; ++a)
        for (int b = a + 1; b < 9; ++b)
          if (ids[a] == ids[b]) {
            dup = true;
            break;
          }
      if (dup) comp_essential[torus_comp[j * R + i]] = 1;
    }

  std::vector<uint8_t> verdict(n, 0);
  for (size_t k = 0; k < n; ++k)
    if (torus_comp[k] >= 0) verdict[k] = comp_essential[torus_comp[k]];
  return verdict;
}

}  // namespace toridyn
