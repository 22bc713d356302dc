#include "toridyn/map.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

namespace toridyn {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// sin(2*pi*t) evaluated on the fractional part of t, so that the value is
// bitwise identical for t and t + k. This makes the lifts exactly
// equivariant in floating point instead of only up to rounding noise.
double sin_tau(double t) { return std::sin(kTwoPi * frac(t)); }

LiftedMap make_identity() {
  LiftedMap m;
  m.eval = [](const Vec2& z) { return z; };
  m.inverse_eval = m.eval;
  m.label = "identity";
  return m;
}

LiftedMap make_translation(double ax, double ay) {
  LiftedMap m;
  Vec2 a(ax, ay);
  m.eval = [a](const Vec2& z) { return Vec2(z + a); };
  m.inverse_eval = [a](const Vec2& z) { return Vec2(z - a); };
  std::ostringstream os;
  os << "translation(" << ax << "," << ay << ")";
  m.label = os.str();
  return m;
}

// Kicked two-shear map with weak 4-fold damping, the homotopic-to-identity
// stand-in for the Chirikov family. A drift by y' itself would act on
// homology as [[1,1],[0,1]], which no lift can repair, so the drift is
// replaced by a periodic kick. Each factor is a circle homeomorphism in one
// coordinate, so the composition is a homeomorphism for every K:
//
//   x <- x + (K/6) sin(2 pi y),   x <- x - (g/8 pi) sin(8 pi x),
//   y <- y + (K/6) sin(2 pi x),   y <- y - (g/8 pi) sin(8 pi y),
//
// with g = 1/2. The scale K/6 makes the kick amplitude exactly 1 at K = 6;
// the damping then anchors attracting fixed points of the lift at the
// quarter-lattice with displacements (+-1, +-1), (+-1, 0) and (0, +-1), so
// the rotation set is the full square [-1,1]^2 and finite-horizon hulls are
// stable in the horizon. (0,0) and (0.5,0) are fixed for every K.
LiftedMap make_standard(double K) {
  LiftedMap m;
  const double b = K / 6.0;
  const double g = 0.5 / (8.0 * std::numbers::pi);
  auto damp = [g](double u) { return u - g * sin_tau(4.0 * u); };
  // Inverse of the damping factor by safeguarded Newton; the derivative is
  // in [1/2, 3/2], so the iteration contracts from u = w.
  auto undamp = [g](double w) {
    double u = w;
    for (int i = 0; i < 60; ++i) {
      double r = u - g * sin_tau(4.0 * u) - w;
      if (std::fabs(r) < 1e-16) break;
      double d = 1.0 - 4.0 * g * kTwoPi * std::cos(kTwoPi * frac(4.0 * u));
      u -= r / d;
    }
    return u;
  };
  m.eval = [b, damp](const Vec2& z) {
    double x = damp(z.x() + b * sin_tau(z.y()));
    double y = damp(z.y() + b * sin_tau(x));
    return Vec2(x, y);
  };
  m.inverse_eval = [b, undamp](const Vec2& z) {
    double y = undamp(z.y()) - b * sin_tau(z.x());
    double x = undamp(z.x()) - b * sin_tau(y);
    return Vec2(x, y);
  };
  std::ostringstream os;
  os << "standard(" << K << ")";
  m.label = os.str();
  return m;
}

Vec2 zas_step(double K, double c, const Vec2& z) {
  return Vec2(z.y(), -z.x() - K * std::sin(kTwoPi * frac(z.y()) - c));
}

Vec2 zas_step_inv(double K, double c, const Vec2& z) {
  double y = z.x();
  double x = -z.y() - K * std::sin(kTwoPi * frac(y) - c);
  return Vec2(x, y);
}

LiftedMap make_zaslavsky_generator(double K, double c) {
  LiftedMap m;
  m.eval = [K, c](const Vec2& z) { return zas_step(K, c, z); };
  m.inverse_eval = [K, c](const Vec2& z) { return zas_step_inv(K, c, z); };
  m.linear_part << 0, 1, -1, 0;
  std::ostringstream os;
  os << "zaslavsky_generator(" << K << "," << c << ")";
  m.label = os.str();
  return m;
}

LiftedMap make_zaslavsky(double K, double c) {
  LiftedMap m;
  m.eval = [K, c](const Vec2& z) {
    Vec2 w = z;
    for (int i = 0; i < 4; ++i) w = zas_step(K, c, w);
    return w;
  };
  m.inverse_eval = [K, c](const Vec2& z) {
    Vec2 w = z;
    for (int i = 0; i < 4; ++i) w = zas_step_inv(K, c, w);
    return w;
  };
  std::ostringstream os;
  os << "zaslavsky(" << K << "," << c << ")";
  m.label = os.str();
  return m;
}

// Rotation by angle * (1 - r/r0) about the lifted copy of the center
// nearest to z. Copies do not overlap because r0 < 1/2, so the map is
// equivariant and identity outside every support disk.
Vec2 disk_twist_step(const Vec2& center, double r0, double angle,
                     double sign, const Vec2& z) {
  Vec2 d = z - center;
  Vec2 v(std::round(d.x()), std::round(d.y()));
  Vec2 local = d - v;
  double r = local.norm();
  if (r >= r0) return z;
  double theta = sign * angle * (1.0 - r / r0);
  double ct = std::cos(theta), st = std::sin(theta);
  Vec2 rot(ct * local.x() - st * local.y(), st * local.x() + ct * local.y());
  return center + v + rot;
}

LiftedMap make_disk_twist(double cx, double cy, double r0, double angle) {
  if (r0 >= 0.5)
    throw std::invalid_argument("disk_twist: support radius must be < 1/2");
  if (r0 <= 0.0)
    throw std::invalid_argument("disk_twist: support radius must be > 0");
  LiftedMap m;
  Vec2 c(cx, cy);
  m.eval = [c, r0, angle](const Vec2& z) {
    return disk_twist_step(c, r0, angle, 1.0, z);
  };
  m.inverse_eval = [c, r0, angle](const Vec2& z) {
    return disk_twist_step(c, r0, angle, -1.0, z);
  };
  std::ostringstream os;
  os << "disk_twist(" << cx << "," << cy << "," << r0 << "," << angle << ")";
  m.label = os.str();
  return m;
}

void require_params(const std::string& name, const std::vector<double>& p,
                    size_t n) {
  if (p.size() != n) {
    std::ostringstream os;
    os << name << ": expected " << n << " parameter(s), got " << p.size();
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

LiftedMap make_map(const std::string& name, const std::vector<double>& params) {
  if (name == "identity") {
    require_params(name, params, 0);
    return make_identity();
  }
  if (name == "translation") {
    require_params(name, params, 2);
    return make_translation(params[0], params[1]);
  }
  if (name == "standard") {
    require_params(name, params, 1);
    return make_standard(params[0]);
  }
  if (name == "zaslavsky") {
    require_params(name, params, 2);
    return make_zaslavsky(params[0], params[1]);
  }
  if (name == "zaslavsky_generator") {
    require_params(name, params, 2);
    return make_zaslavsky_generator(params[0], params[1]);
  }
  if (name == "disk_twist") {
    require_params(name, params, 4);
    return make_disk_twist(params[0], params[1], params[2], params[3]);
  }
  throw std::invalid_argument("unknown map name: " + name);
}

LiftedMap parse_map_spec(const std::string& spec) {
  size_t i = 0;
  auto skip_ws = [&] {
    while (i < spec.size() && std::isspace(static_cast<unsigned char>(spec[i])))
      ++i;
  };
  skip_ws();
  size_t start = i;
  while (i < spec.size() &&
         (std::isalnum(static_cast<unsigned char>(spec[i])) || spec[i] == '_'))
    ++i;
  std::string name = spec.substr(start, i - start);
  if (name.empty())
    throw std::invalid_argument("map spec: expected identifier in '" + spec +
                                "'");
  skip_ws();
  std::vector<double> params;
  if (i < spec.size()) {
    if (spec[i] != '(')
      throw std::invalid_argument("map spec: expected '(' in '" + spec + "'");
    ++i;
    skip_ws();
    if (i < spec.size() && spec[i] == ')') {
      ++i;
    } else {
      while (true) {
        size_t pos = 0;
        double v;
        try {
          v = std::stod(spec.substr(i), &pos);
        } catch (const std::exception&) {
          throw std::invalid_argument("map spec: bad number in '" + spec + "'");
        }
        params.push_back(v);
        i += pos;
        skip_ws();
        if (i >= spec.size())
          throw std::invalid_argument("map spec: missing ')' in '" + spec +
                                      "'");
        if (spec[i] == ',') {
          ++i;
          skip_ws();
          continue;
        }
        if (spec[i] == ')') {
          ++i;
          break;
        }
        throw std::invalid_argument("map spec: unexpected character in '" +
                                    spec + "'");
      }
    }
  }
  skip_ws();
  if (i != spec.size())
    throw std::invalid_argument("map spec: trailing garbage in '" + spec + "'");
  return make_map(name, params);
}

LiftedMap power_map(const LiftedMap& m, int k) {
  if (k < 1) throw std::invalid_argument("power_map: k must be >= 1");
  LiftedMap p;
  auto f = m.eval;
  p.eval = [f, k](const Vec2& z) {
    Vec2 w = z;
    for (int i = 0; i < k; ++i) w = f(w);
    return w;
  };
  if (m.has_inverse()) {
    auto g = m.inverse_eval;
    p.inverse_eval = [g, k](const Vec2& z) {
      Vec2 w = z;
      for (int i = 0; i < k; ++i) w = g(w);
      return w;
    };
  }
  Mat2i L = Mat2i::Identity();
  for (int i = 0; i < k; ++i) L = L * m.linear_part;
  p.linear_part = L;
  p.label = m.label + "^" + std::to_string(k);
  return p;
}

std::vector<Vec2> iterate_lift(const LiftedMap& m, const Vec2& z, long n) {
  if (n < 0 && !m.has_inverse())
    throw std::invalid_argument("iterate_lift: negative n without an inverse");
  std::vector<Vec2> orbit;
  orbit.reserve(static_cast<size_t>(std::labs(n)) + 1);
  orbit.push_back(z);
  Vec2 w = z;
  if (n >= 0) {
    for (long i = 0; i < n; ++i) {
      w = m.eval(w);
      orbit.push_back(w);
    }
  } else {
    for (long i = 0; i < -n; ++i) {
      w = m.inverse_eval(w);
      orbit.push_back(w);
    }
  }
  return orbit;
}

Vec2 displacement(const LiftedMap& m, const Vec2& z, long n) {
  if (n < 1) throw std::invalid_argument("displacement: n must be >= 1");
  if (!m.homotopic_to_identity())
    throw std::invalid_argument(
        "displacement: map is not homotopic to the identity");
  Vec2 w = z;
  for (long i = 0; i < n; ++i) w = m.eval(w);
  return w - z;
}

}  // namespace toridyn
