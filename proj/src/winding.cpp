#include "toridyn/winding.hpp"

#include <cmath>
#include <deque>
#include <numbers>
#include <sstream>

namespace toridyn {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  Vec2 d = b - a;
  double len2 = d.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  double t = std::clamp((p - a).dot(d) / len2, 0.0, 1.0);
  return (p - (a + t * d)).norm();
}

int mod(int a, int m) {
  int r = a % m;
  return r < 0 ? r + m : r;
}

long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

void Polyline::validate() const {
  if (points.size() < 2)
    throw std::invalid_argument("Polyline: need at least two points");
  for (size_t i = 0; i + 1 < points.size(); ++i)
    if ((points[i + 1] - points[i]).norm() <= 1e-12)
      throw std::invalid_argument("Polyline: consecutive points coincide");
  if (closed && (points.front() - points.back()).norm() > 1e-9)
    throw std::invalid_argument("Polyline: closed flag but endpoints differ");
}

double winding_index(std::span<const Vec2> vertices, const Vec2& z,
                     bool closed) {
  double total = 0.0;
  for (size_t i = 0; i + 1 < vertices.size(); ++i) {
    const Vec2& a = vertices[i];
    const Vec2& b = vertices[i + 1];
    if ((b - a).norm() <= 1e-15) continue;  // degenerate segment
    if (point_segment_distance(z, a, b) <= 1e-9)
      throw std::invalid_argument("winding_index: point on or too near path");
    Vec2 u = a - z, v = b - z;
    total += std::atan2(u.x() * v.y() - u.y() * v.x(), u.dot(v));
  }
  double index = total / kTwoPi;
  if (closed) {
    double rounded = std::round(index);
    if (std::fabs(index - rounded) > 1e-6) {
      std::ostringstream os;
      os << "winding_index: closed loop gave non-integer index " << index;
      throw std::runtime_error(os.str());
    }
    return rounded;
  }
  return index;
}

double winding_index(const Polyline& p, const Vec2& z) {
  p.validate();
  return winding_index(std::span<const Vec2>(p.points), z, p.closed);
}

IsotopyPath isotopy_path(const LiftedMap& m, const Vec2& z, int k) {
  if (k < 1) throw std::invalid_argument("isotopy_path: k must be >= 1");
  if (!m.homotopic_to_identity())
    throw std::invalid_argument(
        "isotopy_path: map is not homotopic to the identity");
  IsotopyPath path;
  path.base = z;
  path.steps = k;
  path.vertices = iterate_lift(m, z, k);
  return path;
}

int linking_number_periodic(const LiftedMap& m, const Vec2& q, int k,
                            const Vec2& p) {
  IsotopyPath path = isotopy_path(m, q, k);
  if ((path.vertices.back() - q).norm() > 1e-7)
    throw std::invalid_argument(
        "linking_number_periodic: q is not k-periodic for the lift");
  if ((m.eval(p) - p).norm() > 1e-9)
    throw std::invalid_argument("linking_number_periodic: p is not fixed");
  std::vector<Vec2> loop = path.vertices;
  loop.back() = q;  // close the loop exactly
  return static_cast<int>(
      std::lround(winding_index(std::span<const Vec2>(loop), p, true)));
}

int linking_number_region(const LiftedMap& m, const GridRegion& U, int k,
                          const Vec2& p, std::optional<Vec2> base) {
  if (k < 1)
    throw std::invalid_argument("linking_number_region: k must be >= 1");
  if (U.empty())
    throw std::invalid_argument("linking_number_region: empty region");
  if ((m.eval(p) - p).norm() > 1e-9)
    throw std::invalid_argument("linking_number_region: p is not fixed");
  const int R = U.R;
  LiftedLabeling lab = label_components(U);
  for (const auto& c : lab.comps)
    if (c.essential())
      throw std::invalid_argument("linking_number_region: region is essential");
  {
    TorusPoint pp = project(p);
    int pi = std::min(static_cast<int>(pp.x * R), R - 1);
    int pj = std::min(static_cast<int>(pp.y * R), R - 1);
    if (U.at(pi, pj))
      throw std::invalid_argument("linking_number_region: p inside region");
  }

  Vec2 z;
  if (base) {
    z = *base;
  } else {
    int first = -1;
    for (size_t c = 0; c < U.cells.size(); ++c)
      if (U.cells[c]) {
        first = static_cast<int>(c);
        break;
      }
    z = Vec2((first % R + 0.5) / R, (first / R + 0.5) / R);
  }
  auto cell_of = [&](const Vec2& v) {
    long pi = static_cast<long>(std::floor(v.x() * R));
    long pj = static_cast<long>(std::floor(v.y() * R));
    int ti = mod(static_cast<int>(pi % R + R), R);
    int tj = mod(static_cast<int>(pj % R + R), R);
    IntVec copy(static_cast<int>(floor_div(pi, R)),
                static_cast<int>(floor_div(pj, R)));
    return std::pair<int, IntVec>(tj * R + ti, copy);
  };
  auto [zc, zcopy] = cell_of(z);
  if (!U.cells[zc])
    throw std::invalid_argument("linking_number_region: base point not in U");

  IsotopyPath path = isotopy_path(m, z, k);
  Vec2 w = path.vertices.back();
  auto [wc, wcopy] = cell_of(w);
  if (!U.cells[wc] || lab.component[wc] != lab.component[zc])
    throw std::invalid_argument(
        "linking_number_region: region not invariant at this resolution");
  // The chosen lift of U is the copy through z: lift(cell) = cell +
  // (offset(cell) - offset(zc)) + zcopy. For sigma to close up in the plane,
  // f^k(z) has to land in that same copy.
  IntVec shift = zcopy - lab.offset[zc];
  if (wcopy != lab.offset[wc] + shift)
    throw std::invalid_argument(
        "linking_number_region: lift of region is not invariant (offset "
        "mismatch)");

  // Grid BFS from the cell of f^k(z) back to the cell of z inside the
  // component; lexicographic neighbor order keeps the path deterministic.
  std::vector<int> prev(U.cells.size(), -1);
  std::deque<int> queue;
  prev[wc] = wc;
  queue.push_back(wc);
  while (!queue.empty() && prev[zc] < 0) {
    int cur = queue.front();
    queue.pop_front();
    int i = cur % R, j = cur / R;
    const int ni[4] = {mod(i - 1, R), mod(i + 1, R), i, i};
    const int nj[4] = {j, j, mod(j - 1, R), mod(j + 1, R)};
    for (int d = 0; d < 4; ++d) {
      int t = nj[d] * R + ni[d];
      if (U.cells[t] && prev[t] < 0 && lab.component[t] == lab.component[zc]) {
        prev[t] = cur;
        queue.push_back(t);
      }
    }
  }
  if (prev[zc] < 0)
    throw std::invalid_argument(
        "linking_number_region: no path through region cells");

  std::vector<Vec2> loop = path.vertices;
  std::vector<int> chain;
  for (int cur = zc; cur != wc; cur = prev[cur]) chain.push_back(cur);
  chain.push_back(wc);
  // chain runs z-cell -> w-cell; sigma needs w-cell -> z-cell.
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    int c = *it;
    IntVec o = lab.offset[c] + shift;
    loop.emplace_back((c % R + 0.5) / R + o.x(), (c / R + 0.5) / R + o.y());
  }
  loop.push_back(z);
  return static_cast<int>(
      std::lround(winding_index(std::span<const Vec2>(loop), p, true)));
}

}  // namespace toridyn
