#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <string>
#include <vector>

#include "zsnn/errors.hpp"

namespace zsnn {

/// Dense row-major tensor. The nn layer stack only ever needs rank 2
/// (batch x features), but shape is kept general for the API surface.
template <typename T>
struct Tensor {
  std::vector<int> shape;
  std::vector<T> data;

  Tensor() = default;

  explicit Tensor(std::vector<int> shape_, T fill = T(0)) : shape(std::move(shape_)) {
    data.assign(numel_of(shape), fill);
  }

  Tensor(int rows, int cols, T fill = T(0)) : Tensor(std::vector<int>{rows, cols}, fill) {}

  static std::size_t numel_of(const std::vector<int>& s) {
    std::size_t n = 1;
    for (int d : s) {
      if (d <= 0) throw ShapeError("Tensor: non-positive dimension");
      n *= static_cast<std::size_t>(d);
    }
    return n;
  }

  std::size_t numel() const { return data.size(); }

  int rows() const {
    if (shape.size() != 2) throw ShapeError("Tensor: rows() needs rank 2");
    return shape[0];
  }
  int cols() const {
    if (shape.size() != 2) throw ShapeError("Tensor: cols() needs rank 2");
    return shape[1];
  }

  T& operator()(int r, int c) { return data[static_cast<std::size_t>(r) * cols() + c]; }
  T operator()(int r, int c) const { return data[static_cast<std::size_t>(r) * cols() + c]; }

  bool all_finite() const {
    for (T v : data)
      if (!std::isfinite(static_cast<double>(v))) return false;
    return true;
  }
};

template <typename T>
Tensor<T> row_tensor(const std::vector<T>& v) {
  Tensor<T> t(1, static_cast<int>(v.size()));
  t.data = v;
  return t;
}

using TensorF = Tensor<float>;
using TensorD = Tensor<double>;

}  // namespace zsnn
