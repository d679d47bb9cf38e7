#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "zsnn/errors.hpp"

namespace zsnn {

/// Bias-corrected Adam. Moment buffers are laid out congruently to the
/// parameter list handed to make_adam_state.
template <typename T>
struct AdamState {
  T lr = T(1e-3);
  T beta1 = T(0.9);
  T beta2 = T(0.999);
  T eps = T(1e-8);
  std::int64_t t = 0;
  std::vector<std::vector<T>> m;
  std::vector<std::vector<T>> v;
};

template <typename T>
AdamState<T> make_adam_state(const std::vector<std::vector<T>*>& params, T lr) {
  AdamState<T> s;
  s.lr = lr;
  for (auto* p : params) {
    s.m.emplace_back(p->size(), T(0));
    s.v.emplace_back(p->size(), T(0));
  }
  return s;
}

template <typename T>
void adam_step(const std::vector<std::vector<T>*>& params,
               const std::vector<const std::vector<T>*>& grads, AdamState<T>& state) {
  if (params.size() != state.m.size() || grads.size() != params.size())
    throw ShapeError("adam_step: parameter/gradient/state arity mismatch");
  state.t += 1;
  double bc1 = 1.0 - std::pow(static_cast<double>(state.beta1), static_cast<double>(state.t));
  double bc2 = 1.0 - std::pow(static_cast<double>(state.beta2), static_cast<double>(state.t));
  for (std::size_t a = 0; a < params.size(); ++a) {
    auto& p = *params[a];
    const auto& g = *grads[a];
    if (p.size() != g.size() || p.size() != state.m[a].size())
      throw ShapeError("adam_step: array size mismatch");
    auto& m = state.m[a];
    auto& v = state.v[a];
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = state.beta1 * m[i] + (T(1) - state.beta1) * g[i];
      v[i] = state.beta2 * v[i] + (T(1) - state.beta2) * g[i] * g[i];
      T mhat = static_cast<T>(m[i] / bc1);
      T vhat = static_cast<T>(v[i] / bc2);
      p[i] -= state.lr * mhat / (std::sqrt(vhat) + state.eps);
    }
  }
}

}  // namespace zsnn
