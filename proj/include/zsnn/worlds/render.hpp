#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "zsnn/errors.hpp"
#include "zsnn/image.hpp"
#include "zsnn/io/idx.hpp"
#include "zsnn/io/pgm.hpp"
#include "zsnn/worlds/glyphs.hpp"
#include "zsnn/worlds/world.hpp"

namespace zsnn {

inline constexpr float kOnLevel = 0.9f;
inline constexpr float kOffLevel = 0.1f;
inline constexpr float kBorderLevel = 0.0f;

namespace detail {

inline float bilinear(const Image& img, double x, double y) {
  auto clampi = [](int v, int lo, int hi) {
    return v < lo ? lo : (v > hi ? hi : v);
  };
  int x0 = static_cast<int>(std::floor(x));
  int y0 = static_cast<int>(std::floor(y));
  double fx = x - x0, fy = y - y0;
  int x1 = x0 + 1, y1 = y0 + 1;
  x0 = clampi(x0, 0, img.width - 1);
  x1 = clampi(x1, 0, img.width - 1);
  y0 = clampi(y0, 0, img.height - 1);
  y1 = clampi(y1, 0, img.height - 1);
  double top = (1 - fx) * img.at(x0, y0) + fx * img.at(x1, y0);
  double bot = (1 - fx) * img.at(x0, y1) + fx * img.at(x1, y1);
  return static_cast<float>((1 - fy) * top + fy * bot);
}

inline Image resample_nearest(const Image& src, int w, int h) {
  Image out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      int sx = static_cast<int>((x + 0.5) * src.width / w);
      int sy = static_cast<int>((y + 0.5) * src.height / h);
      if (sx >= src.width) sx = src.width - 1;
      if (sy >= src.height) sy = src.height - 1;
      out.at(x, y) = src.at(sx, sy);
    }
  return out;
}

}  // namespace detail

// Swirl warp about the image center: a pixel at polar (r, theta) samples the
// source at (r, theta + strength*(1 - r/R)), R = min(W,H)/2, bilinear.
// Applying strength then -strength is the identity up to resampling error.
inline Image swirl(const Image& img, double strength) {
  if (strength == 0.0) return img;
  Image out(img.width, img.height);
  const double cx = img.width / 2.0, cy = img.height / 2.0;
  const double R = std::min(img.width, img.height) / 2.0;
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      double px = (x + 0.5) - cx, py = (y + 0.5) - cy;
      double r = std::hypot(px, py);
      double theta = std::atan2(py, px);
      double ts = theta + strength * (1.0 - r / R);
      double sx = cx + r * std::cos(ts) - 0.5;
      double sy = cy + r * std::sin(ts) - 0.5;
      out.at(x, y) = detail::bilinear(img, sx, sy);
    }
  return out;
}

// Reference cell images, one per tile id (solved position), each res x res.
inline std::vector<Image> tile_glyph_cells(const WorldConfig& cfg) {
  const int res = cfg.res();
  const int count = cfg.rows * cfg.cols;
  std::vector<Image> out;
  out.reserve(count);
  switch (cfg.tile_source) {
    case TileSource::BuiltinGlyphs: {
      if (count > 10)
        throw ParamError("builtin glyphs cover tile ids 0-9 only");
      int k = res / 8;
      if (k < 1) k = 1;
      if (7 * k > res)
        throw ParamError("resolution too small for builtin glyphs");
      const int ox = (res - 5 * k) / 2, oy = (res - 7 * k) / 2;
      for (int d = 0; d < count; ++d) {
        Image cell(res, res, kOffLevel);
        for (int gy = 0; gy < 7; ++gy)
          for (int gx = 0; gx < 5; ++gx) {
            if (!glyph_bit(d, gx, gy)) continue;
            for (int yy = 0; yy < k; ++yy)
              for (int xx = 0; xx < k; ++xx)
                cell.at(ox + gx * k + xx, oy + gy * k + yy) = kOnLevel;
          }
        out.push_back(std::move(cell));
      }
      break;
    }
    case TileSource::ExternalImage: {
      Image src = read_pgm(cfg.tile_path);
      Image fit = detail::resample_nearest(src, cfg.cols * res, cfg.rows * res);
      for (int t = 0; t < count; ++t) {
        const int r0 = (t / cfg.cols) * res, c0 = (t % cfg.cols) * res;
        Image cell(res, res);
        for (int y = 0; y < res; ++y)
          for (int x = 0; x < res; ++x) cell.at(x, y) = fit.at(c0 + x, r0 + y);
        out.push_back(std::move(cell));
      }
      break;
    }
    case TileSource::IdxDigits: {
      auto imgs = read_idx_images(cfg.tile_path);
      if (static_cast<int>(imgs.size()) < count)
        throw IoError("IDX file holds fewer images than tiles: " +
                      cfg.tile_path);
      for (int t = 0; t < count; ++t)
        out.push_back(detail::resample_nearest(imgs[t], res, res));
      break;
    }
  }
  return out;
}

inline Image render(const WorldState& s, const WorldConfig& cfg) {
  validate_state(s, cfg);
  const int res = cfg.res();
  Image img(cfg.img_w(), cfg.img_h());
  if (cfg.lights()) {
    for (int r = 0; r < cfg.n; ++r)
      for (int c = 0; c < cfg.n; ++c) {
        const float fill = s.v[r * cfg.n + c] ? kOnLevel : kOffLevel;
        for (int y = 0; y < res; ++y)
          for (int x = 0; x < res; ++x) {
            const bool border =
                x == 0 || y == 0 || x == res - 1 || y == res - 1;
            img.at(c * res + x, r * res + y) = border ? kBorderLevel : fill;
          }
      }
    if (cfg.kind == WorldKind::TwistedLightsOut)
      img = swirl(img, cfg.swirl_strength);
  } else {
    auto cells = tile_glyph_cells(cfg);
    for (int i = 0; i < cfg.cells(); ++i) {
      const Image& cell = cells[s.v[i]];
      const int r0 = (i / cfg.cols) * res, c0 = (i % cfg.cols) * res;
      for (int y = 0; y < res; ++y)
        for (int x = 0; x < res; ++x) img.at(c0 + x, r0 + y) = cell.at(x, y);
    }
  }
  return img;
}

}  // namespace zsnn
