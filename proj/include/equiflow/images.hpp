#pragma once

// Raw image emission: |u - a| as 8-bit PGM, phase index (nearest well) as a
// fixed-palette PPM. For 3D fields the z = 0 slice is rasterized.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "equiflow/errors.hpp"
#include "equiflow/field.hpp"
#include "equiflow/potential.hpp"

namespace equiflow {

namespace detail {

struct Raster {
  int width = 0, height = 0;
  double x0 = 0, y0 = 0, px = 1;  // pixel (c, r) center = (x0 + c px, y0 - r px)
  bool flat = false;              // 1D: a strip
};

inline Raster plan_raster(const Grid& g) {
  Raster r;
  double lo[2] = {1e300, 1e300}, hi[2] = {-1e300, -1e300};
  int axes = std::min(g.n, 2);
  for (const Vec& p : g.pos) {
    for (int k = 0; k < axes; ++k) {
      lo[k] = std::min(lo[k], p[k]);
      hi[k] = std::max(hi[k], p[k]);
    }
  }
  if (g.n == 1) {
    r.flat = true;
    r.px = g.h / 2;
    r.width = std::min(2048, int((hi[0] - lo[0]) / r.px) + 1);
    r.px = (hi[0] - lo[0]) / std::max(1, r.width - 1);
    r.height = 48;
    r.x0 = lo[0];
    r.y0 = 0;
    return r;
  }
  r.px = g.h / 2;
  double span = std::max(hi[0] - lo[0], hi[1] - lo[1]);
  if (span / r.px > 1200) r.px = span / 1200;
  r.width = int((hi[0] - lo[0]) / r.px) + 1;
  r.height = int((hi[1] - lo[1]) / r.px) + 1;
  r.x0 = lo[0];
  r.y0 = hi[1];
  return r;
}

inline Vec raster_point(const Grid& g, const Raster& r, int row, int col) {
  Vec x = Vec::zero(g.n);
  x[0] = r.x0 + col * r.px;
  if (g.n >= 2) x[1] = r.y0 - row * r.px;
  if (g.n >= 3) x[2] = 0;  // middle slice
  return x;
}

}  // namespace detail

inline void write_pgm(const Field& u, const Vec& a, const std::string& path) {
  const Grid& g = *u.grid;
  detail::Raster r = detail::plan_raster(g);
  double vmax = 0;
  for (int i = 0; i < g.node_count(); ++i)
    vmax = std::max(vmax, norm(u.at(i) - a));
  std::FILE* fp = std::fopen(path.c_str(), "wb");
  if (!fp) throw FileFormat("cannot open " + path + " for writing");
  std::fprintf(fp, "P5\n%d %d\n255\n", r.width, r.height);
  std::vector<unsigned char> row(size_t(r.width));
  for (int y = 0; y < r.height; ++y) {
    for (int x = 0; x < r.width; ++x) {
      Vec p = detail::raster_point(g, r, r.flat ? 0 : y, x);
      InterpStencil st = g.locate(p);
      unsigned char pix = 0;
      if (st.count > 0 && vmax > 0) {
        Vec val = u.sample(p);
        double t = 255.0 * norm(val - a) / vmax;
        pix = (unsigned char)std::clamp(t, 0.0, 255.0);
      }
      row[size_t(x)] = pix;
    }
    std::fwrite(row.data(), 1, row.size(), fp);
  }
  std::fclose(fp);
}

inline void write_ppm(const Field& u, const Potential& W,
                      const std::string& path) {
  static const unsigned char palette[8][3] = {
      {230, 25, 75},  {60, 180, 75},  {255, 225, 25}, {0, 130, 200},
      {245, 130, 48}, {145, 30, 180}, {70, 240, 240}, {240, 50, 230}};
  const Grid& g = *u.grid;
  detail::Raster r = detail::plan_raster(g);
  std::FILE* fp = std::fopen(path.c_str(), "wb");
  if (!fp) throw FileFormat("cannot open " + path + " for writing");
  std::fprintf(fp, "P6\n%d %d\n255\n", r.width, r.height);
  std::vector<unsigned char> row(size_t(r.width) * 3);
  for (int y = 0; y < r.height; ++y) {
    for (int x = 0; x < r.width; ++x) {
      Vec p = detail::raster_point(g, r, r.flat ? 0 : y, x);
      InterpStencil st = g.locate(p);
      unsigned char* pix = row.data() + size_t(x) * 3;
      if (st.count == 0) {
        pix[0] = pix[1] = pix[2] = 0;
      } else {
        int idx = W.nearest_well(u.sample(p)) % 8;
        pix[0] = palette[idx][0];
        pix[1] = palette[idx][1];
        pix[2] = palette[idx][2];
      }
    }
    std::fwrite(row.data(), 1, row.size(), fp);
  }
  std::fclose(fp);
}

}  // namespace equiflow
