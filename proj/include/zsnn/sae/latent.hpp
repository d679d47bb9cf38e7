#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "zsnn/errors.hpp"
#include "zsnn/nn/tensor.hpp"
#include "zsnn/rng.hpp"

namespace zsnn {

struct TauSchedule {
  double tau_max = 5.0;
  double tau_min = 0.7;
};

// N binary propositions, each a 2-category Gumbel-Softmax unit.
struct LatentConfig {
  int N = 1;
  int M = 2;  // categories per unit; only 2 is supported
  TauSchedule tau;
};

inline void validate_latent(const LatentConfig& c) {
  if (c.N < 1) throw ParamError("LatentConfig: N must be >= 1");
  if (c.M != 2) throw ParamError("LatentConfig: only M == 2 is supported");
  if (!(c.tau.tau_max >= c.tau.tau_min) || !(c.tau.tau_min > 0))
    throw ParamError("LatentConfig: need tau_max >= tau_min > 0");
}

namespace detail {

// Stable two-way softmax of (a0, a1) written to (o0, o1).
template <typename T>
inline void softmax2(T a0, T a1, T& o0, T& o1) {
  T m = a0 > a1 ? a0 : a1;
  T e0 = std::exp(a0 - m), e1 = std::exp(a1 - m);
  T s = e0 + e1;
  o0 = e0 / s;
  o1 = e1 / s;
}

}  // namespace detail

// z_n = softmax((logits_n + g)/tau) at caller-provided Gumbel noise (one g
// per element). Layout: flat pair arrays, element 2n = category 0 (false),
// 2n+1 = category 1 (true). Works on any number of rows x pairs.
template <typename T>
void gumbel_softmax_fixed_flat(const T* logits, const T* noise, T* z,
                               std::size_t pairs, double tau) {
  if (!(tau > 0)) throw ParamError("gumbel_softmax: tau must be > 0");
  for (std::size_t i = 0; i < pairs; ++i) {
    T a0 = (logits[2 * i] + noise[2 * i]) / static_cast<T>(tau);
    T a1 = (logits[2 * i + 1] + noise[2 * i + 1]) / static_cast<T>(tau);
    detail::softmax2(a0, a1, z[2 * i], z[2 * i + 1]);
  }
}

// Same with fresh standard Gumbel noise drawn from rng (two per pair).
template <typename T>
void gumbel_softmax_flat(const T* logits, T* z, std::size_t pairs, double tau,
                         Rng& rng) {
  if (!(tau > 0)) throw ParamError("gumbel_softmax: tau must be > 0");
  std::vector<T> noise(2 * pairs);
  for (auto& g : noise) g = static_cast<T>(rng.gumbel());
  gumbel_softmax_fixed_flat(logits, noise.data(), z, pairs, tau);
}

// Noise-free class probabilities q_n = softmax(logits_n).
template <typename T>
void class_probs_flat(const T* logits, T* q, std::size_t pairs) {
  for (std::size_t i = 0; i < pairs; ++i)
    detail::softmax2(logits[2 * i], logits[2 * i + 1], q[2 * i], q[2 * i + 1]);
}

// One-hot rows at arg max; exact ties resolve toward category 0 (false).
template <typename T>
void argmax_flat(const T* logits, T* z, std::size_t pairs) {
  for (std::size_t i = 0; i < pairs; ++i) {
    bool one = logits[2 * i + 1] > logits[2 * i];
    z[2 * i] = one ? T(0) : T(1);
    z[2 * i + 1] = one ? T(1) : T(0);
  }
}

// N x 2 matrix front-ends.
template <typename T>
Tensor<T> gumbel_softmax(const Tensor<T>& logits, double tau, Rng& rng) {
  if (logits.shape.size() != 2 || logits.cols() != 2)
    throw ShapeError("gumbel_softmax: logits must be N x 2");
  Tensor<T> z = logits;
  gumbel_softmax_flat(logits.data.data(), z.data.data(),
                      static_cast<std::size_t>(logits.rows()), tau, rng);
  return z;
}

template <typename T>
Tensor<T> class_probs(const Tensor<T>& logits) {
  if (logits.shape.size() != 2 || logits.cols() != 2)
    throw ShapeError("class_probs: logits must be N x 2");
  Tensor<T> q = logits;
  class_probs_flat(logits.data.data(), q.data.data(),
                   static_cast<std::size_t>(logits.rows()));
  return q;
}

template <typename T>
Tensor<T> argmax_activation(const Tensor<T>& logits) {
  if (logits.shape.size() != 2 || logits.cols() != 2)
    throw ShapeError("argmax_activation: logits must be N x 2");
  Tensor<T> z = logits;
  argmax_flat(logits.data.data(), z.data.data(),
              static_cast<std::size_t>(logits.rows()));
  return z;
}

// Exponential decay tau_max -> tau_min over the first 90% of training, flat
// at tau_min afterwards.
inline double anneal_tau(int epoch, int total_epochs, const TauSchedule& s) {
  if (epoch < 0 || epoch >= total_epochs)
    throw ParamError("anneal_tau: epoch out of range");
  if (!(s.tau_max >= s.tau_min) || !(s.tau_min > 0))
    throw ParamError("anneal_tau: need tau_max >= tau_min > 0");
  double r = std::log(s.tau_max / s.tau_min) / (0.9 * total_epochs);
  double tau = s.tau_max * std::exp(-r * epoch);
  return tau < s.tau_min ? s.tau_min : tau;
}

// Backprop through z = softmax((l+g)/tau) at fixed noise: given dL/dz for
// one pair, accumulate dL/dl. Softmax jacobian scaled by 1/tau.
template <typename T>
void gumbel_softmax_backward_flat(const T* z, const T* dz, T* dlogits,
                                  std::size_t pairs, double tau) {
  const T inv_tau = static_cast<T>(1.0 / tau);
  for (std::size_t i = 0; i < pairs; ++i) {
    T z0 = z[2 * i], z1 = z[2 * i + 1];
    T dot = dz[2 * i] * z0 + dz[2 * i + 1] * z1;
    dlogits[2 * i] += inv_tau * z0 * (dz[2 * i] - dot);
    dlogits[2 * i + 1] += inv_tau * z1 * (dz[2 * i + 1] - dot);
  }
}

}  // namespace zsnn
