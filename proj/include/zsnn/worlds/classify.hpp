#pragma once

#include <optional>
#include <string>
#include <vector>

#include "zsnn/errors.hpp"
#include "zsnn/image.hpp"
#include "zsnn/worlds/render.hpp"
#include "zsnn/worlds/world.hpp"

namespace zsnn {

// The perception half of the ground-truth validator. Returns nullopt when
// the image is too ambiguous (margin below cfg.tau_margin) or violates the
// tile permutation constraint — ambiguity is a verdict, not an exception.
inline std::optional<WorldState> classify_image(const Image& img,
                                                const WorldConfig& cfg) {
  if (img.width != cfg.img_w() || img.height != cfg.img_h())
    throw ShapeError("classify_image: image dimensions do not match config");
  const int res = cfg.res();
  WorldState s;
  s.v.resize(cfg.cells());
  if (cfg.lights()) {
    Image flat = cfg.kind == WorldKind::TwistedLightsOut
                     ? swirl(img, -cfg.swirl_strength)
                     : img;
    // Mean over the cell interior (border ring excluded) against the on/off
    // midpoint; demand a margin of tau_margin * (on-off gap).
    const double mid = 0.5 * (kOnLevel + kOffLevel);
    const double need = cfg.tau_margin * (kOnLevel - kOffLevel);
    for (int r = 0; r < cfg.n; ++r)
      for (int c = 0; c < cfg.n; ++c) {
        double sum = 0;
        int cnt = 0;
        for (int y = 1; y < res - 1; ++y)
          for (int x = 1; x < res - 1; ++x) {
            sum += flat.at(c * res + x, r * res + y);
            ++cnt;
          }
        const double mean = sum / cnt;
        if (std::abs(mean - mid) < need) return std::nullopt;
        s.v[r * cfg.n + c] = mean > mid ? 1 : 0;
      }
  } else {
    auto refs = tile_glyph_cells(cfg);
    std::vector<char> used(refs.size(), 0);
    for (int i = 0; i < cfg.cells(); ++i) {
      const int r0 = (i / cfg.cols) * res, c0 = (i % cfg.cols) * res;
      std::vector<double> dist(refs.size());
      for (std::size_t t = 0; t < refs.size(); ++t) {
        double d = 0;
        for (int y = 0; y < res; ++y)
          for (int x = 0; x < res; ++x) {
            double diff = img.at(c0 + x, r0 + y) - refs[t].at(x, y);
            d += diff * diff;
          }
        dist[t] = d;
      }
      int best_t = 0;
      for (std::size_t t = 1; t < dist.size(); ++t)
        if (dist[t] < dist[best_t]) best_t = static_cast<int>(t);
      double best = dist[best_t];
      double second = -1;
      for (std::size_t t = 0; t < dist.size(); ++t)
        if (static_cast<int>(t) != best_t && (second < 0 || dist[t] < second))
          second = dist[t];
      // Relative margin between best and runner-up distances.
      if (second <= 0 || (second - best) < cfg.tau_margin * second)
        return std::nullopt;
      if (used[best_t]) return std::nullopt;  // duplicate tile
      used[best_t] = 1;
      s.v[i] = best_t;
    }
  }
  return s;
}

struct PlanVerdict {
  bool ok = false;
  int fail_index = -1;  // first failing frame (classify) or target of a bad step
  std::string reason;
  std::vector<WorldState> states;  // classified states up to the failure
};

// Ok iff every frame classifies and every consecutive pair is one legal move.
inline PlanVerdict validate_plan(const std::vector<Image>& frames,
                                 const WorldConfig& cfg) {
  if (frames.empty()) throw ParamError("validate_plan: need at least 1 frame");
  PlanVerdict v;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    auto s = classify_image(frames[i], cfg);
    if (!s) {
      v.fail_index = static_cast<int>(i);
      v.reason = "frame " + std::to_string(i) + " does not classify";
      return v;
    }
    if (!v.states.empty() && !is_transition(v.states.back(), *s, cfg)) {
      v.fail_index = static_cast<int>(i);
      v.reason = "illegal transition into frame " + std::to_string(i);
      return v;
    }
    v.states.push_back(std::move(*s));
  }
  v.ok = true;
  return v;
}

}  // namespace zsnn
