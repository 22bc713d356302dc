#include "toridyn/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace toridyn {

namespace {

std::ofstream open_out(const std::string& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Image::Image(int w, int h, uint8_t r, uint8_t g, uint8_t b)
    : width(w), height(h), rgb(static_cast<size_t>(w) * h * 3) {
  for (size_t k = 0; k < rgb.size(); k += 3) {
    rgb[k] = r;
    rgb[k + 1] = g;
    rgb[k + 2] = b;
  }
}

void Image::set(int x, int y, uint8_t r, uint8_t g, uint8_t b) {
  if (x < 0 || x >= width || y < 0 || y >= height) return;
  size_t k = (static_cast<size_t>(y) * width + x) * 3;
  rgb[k] = r;
  rgb[k + 1] = g;
  rgb[k + 2] = b;
}

void write_ppm(const std::string& path, const Image& img) {
  auto out = open_out(path, true);
  out << "P6\n" << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.rgb.data()),
            static_cast<std::streamsize>(img.rgb.size()));
}

void write_pbm(const std::string& path, const GridRegion& region) {
  auto out = open_out(path);
  out << "P1\n" << region.R << " " << region.R << "\n";
  for (int j = 0; j < region.R; ++j) {
    for (int i = 0; i < region.R; ++i) {
      if (i) out << ' ';
      out << (region.at(i, j) ? 1 : 0);
    }
    out << '\n';
  }
}

GridRegion read_pbm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::string magic;
  in >> magic;
  if (magic != "P1") throw std::runtime_error("not a P1 bitmap: " + path);
  int w = 0, h = 0;
  in >> w >> h;
  if (w != h || w < 2) throw std::runtime_error("bad bitmap size in " + path);
  GridRegion region(w);
  for (int j = 0; j < h; ++j)
    for (int i = 0; i < w; ++i) {
      int v;
      if (!(in >> v)) throw std::runtime_error("truncated bitmap: " + path);
      region.set(i, j, v != 0);
    }
  return region;
}

void write_samples_csv(const std::string& path,
                       const RotationSetEstimate& est) {
  auto out = open_out(path);
  out << "x0,y0,n,dx,dy\n";
  for (const auto& s : est.samples)
    out << format_double(s.start.x()) << ',' << format_double(s.start.y())
        << ',' << s.horizon << ',' << format_double(s.value.x()) << ','
        << format_double(s.value.y()) << '\n';
}

void write_hull_csv(const std::string& path, const ConvexPolygon& hull) {
  auto out = open_out(path);
  out << "x,y\n";
  for (const auto& v : hull.vertices)
    out << format_double(v.x()) << ',' << format_double(v.y()) << '\n';
}

void write_hull_svg(const std::string& path, const ConvexPolygon& hull) {
  // Fit the hull into a 400x400 viewport with a 10% margin.
  double minx = hull.vertices[0].x(), maxx = minx;
  double miny = hull.vertices[0].y(), maxy = miny;
  for (const auto& v : hull.vertices) {
    minx = std::min(minx, v.x());
    maxx = std::max(maxx, v.x());
    miny = std::min(miny, v.y());
    maxy = std::max(maxy, v.y());
  }
  double span = std::max({maxx - minx, maxy - miny, 1e-9});
  double pad = 0.1 * span;
  minx -= pad;
  miny -= pad;
  span += 2 * pad;
  auto sx = [&](double x) { return 400.0 * (x - minx) / span; };
  auto sy = [&](double y) { return 400.0 * (1.0 - (y - miny) / span); };
  auto out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"400\" "
         "height=\"400\" viewBox=\"0 0 400 400\">\n";
  out << "<polygon points=\"";
  for (const auto& v : hull.vertices)
    out << format_double(sx(v.x())) << ',' << format_double(sy(v.y())) << ' ';
  out << "\" fill=\"#9ecae1\" stroke=\"#08519c\" stroke-width=\"1\"/>\n";
  out << "</svg>\n";
}

void write_polyline_csv(const std::string& path, const Polyline& line) {
  auto out = open_out(path);
  out << "x,y\n";
  for (const auto& p : line.points)
    out << format_double(p.x()) << ',' << format_double(p.y()) << '\n';
}

Polyline read_polyline_csv(const std::string& path, bool closed) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  Polyline line;
  line.closed = closed;
  std::string row;
  bool first = true;
  while (std::getline(in, row)) {
    if (row.empty()) continue;
    if (first && row.find("x") != std::string::npos) {
      first = false;
      continue;  // header
    }
    first = false;
    std::istringstream is(row);
    double x, y;
    char comma;
    if (!(is >> x >> comma >> y) || comma != ',')
      throw std::runtime_error("bad polyline row '" + row + "' in " + path);
    line.points.emplace_back(x, y);
  }
  line.validate();
  return line;
}

void write_roots_csv(const std::string& path,
                     const std::vector<PeriodicRoot>& roots) {
  auto out = open_out(path);
  out << "x,y,residual\n";
  for (const auto& r : roots)
    out << format_double(r.point.x()) << ',' << format_double(r.point.y())
        << ',' << format_double(r.residual) << '\n';
}

void write_deviation_csv(const std::string& path, const DeviationCurve& curve) {
  auto out = open_out(path);
  out << "n,d\n";
  for (size_t i = 0; i < curve.horizons.size(); ++i)
    out << curve.horizons[i] << ',' << format_double(curve.values[i]) << '\n';
}

}  // namespace toridyn
