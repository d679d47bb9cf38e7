#pragma once

#include <string>
#include <vector>

#include "zsnn/errors.hpp"
#include "zsnn/image.hpp"
#include "zsnn/io/pgm.hpp"

namespace zsnn {

// Lays the frames out left to right with a 2-pixel black separator column
// between neighbours: width = k*w + 2*(k-1).
inline Image plan_strip(const std::vector<Image>& frames) {
  if (frames.empty()) throw ParamError("plan_strip: no frames");
  const int w = frames.front().width, h = frames.front().height;
  for (const auto& f : frames)
    if (f.width != w || f.height != h)
      throw ShapeError("plan_strip: frame dimensions differ");
  const int k = static_cast<int>(frames.size());
  Image strip(k * w + 2 * (k - 1), h, 0.0f);
  for (int i = 0; i < k; ++i) {
    const int x0 = i * (w + 2);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        strip.at(x0 + x, y) = frames[i].at(x, y);
  }
  return strip;
}

inline void emit_plan_strip(const std::vector<Image>& frames,
                            const std::string& path) {
  write_pgm(path, plan_strip(frames));
}

}  // namespace zsnn
