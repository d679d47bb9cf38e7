#pragma once

#include <cstddef>
#include <vector>

#include "zsnn/errors.hpp"

namespace zsnn {

/// Grayscale image, row-major, values in [0,1].
struct Image {
  int width = 0;
  int height = 0;
  std::vector<float> px;

  Image() = default;
  Image(int w, int h, float fill = 0.0f)
      : width(w), height(h), px(static_cast<std::size_t>(w) * h, fill) {}

  std::size_t size() const { return px.size(); }

  float& at(int x, int y) { return px[static_cast<std::size_t>(y) * width + x]; }
  float at(int x, int y) const {
    return px[static_cast<std::size_t>(y) * width + x];
  }

  bool same_shape(const Image& o) const {
    return width == o.width && height == o.height;
  }
};

inline void require_same_shape(const Image& a, const Image& b,
                               const char* what) {
  if (!a.same_shape(b))
    throw ShapeError(std::string(what) + ": image shapes differ");
}

}  // namespace zsnn
