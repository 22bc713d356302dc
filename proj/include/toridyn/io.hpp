#pragma once

#include <string>
#include <vector>

#include "toridyn/orbit_search.hpp"
#include "toridyn/region.hpp"
#include "toridyn/rotation.hpp"
#include "toridyn/winding.hpp"

namespace toridyn {

/// Shortest round-tripping decimal form of a double ("%.17g").
std::string format_double(double v);

struct Image {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> rgb;  // 3 bytes per pixel, row-major, top row first

  Image(int w, int h, uint8_t r = 255, uint8_t g = 255, uint8_t b = 255);
  void set(int x, int y, uint8_t r, uint8_t g, uint8_t b);
};

/// Binary portable pixmap (P6 W H 255).
void write_ppm(const std::string& path, const Image& img);

/// Portable bitmap text (P1) for bitmap regions; reader for interchange.
void write_pbm(const std::string& path, const GridRegion& region);
GridRegion read_pbm(const std::string& path);

/// Sample dump with header x0,y0,n,dx,dy.
void write_samples_csv(const std::string& path,
                       const RotationSetEstimate& est);

/// Hull vertices as x,y rows, and as an SVG polygon.
void write_hull_csv(const std::string& path, const ConvexPolygon& hull);
void write_hull_svg(const std::string& path, const ConvexPolygon& hull);

/// Polylines as x,y rows.
void write_polyline_csv(const std::string& path, const Polyline& line);
Polyline read_polyline_csv(const std::string& path, bool closed);

/// Roots as x,y,residual rows.
void write_roots_csv(const std::string& path,
                     const std::vector<PeriodicRoot>& roots);

/// Deviation curves as n,d rows.
void write_deviation_csv(const std::string& path, const DeviationCurve& curve);

}  // namespace toridyn
