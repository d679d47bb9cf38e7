#pragma once

#include <cmath>
#include <cstddef>

#include "zsnn/errors.hpp"
#include "zsnn/image.hpp"
#include "zsnn/nn/tensor.hpp"

namespace zsnn {

enum class LossKind { NG, SAE, ZSAE };

struct LossVariant {
  LossKind kind = LossKind::SAE;
  double alpha = 0.0;                  // ZSAE zero-suppression magnitude
  double warmup_fraction = 1.0 / 3.0;  // ZSAE: alpha held at 0 early on

  static LossVariant ng() { return {LossKind::NG, 0.0, 0.0}; }
  static LossVariant sae() { return {LossKind::SAE, 0.0, 0.0}; }
  static LossVariant zsae(double alpha, double warmup_fraction = 1.0 / 3.0) {
    if (alpha < 0) throw ParamError("ZSAE: alpha must be >= 0");
    if (warmup_fraction < 0 || warmup_fraction > 1)
      throw ParamError("ZSAE: warmup_fraction must be in [0,1]");
    return {LossKind::ZSAE, alpha, warmup_fraction};
  }
};

inline const char* loss_name(LossKind k) {
  switch (k) {
    case LossKind::NG: return "ng";
    case LossKind::SAE: return "sae";
    case LossKind::ZSAE: return "zsae";
  }
  return "?";
}

inline constexpr double kBceClamp = 1e-7;

// Mean binary cross entropy over pixels, prediction clamped away from 0/1.
inline double reconstruction_loss(const Image& x, const Image& xhat) {
  require_same_shape(x, xhat, "reconstruction_loss");
  double s = 0;
  for (std::size_t i = 0; i < x.px.size(); ++i) {
    double p = xhat.px[i];
    if (p < kBceClamp) p = kBceClamp;
    if (p > 1.0 - kBceClamp) p = 1.0 - kBceClamp;
    double t = x.px[i];
    s -= t * std::log(p) + (1.0 - t) * std::log1p(-p);
  }
  return s / static_cast<double>(x.px.size());
}

// Same BCE over flat arrays (batch x pixels), mean over every element.
template <typename T>
double bce_mean_flat(const T* target, const T* pred, std::size_t count) {
  double s = 0;
  for (std::size_t i = 0; i < count; ++i) {
    double p = pred[i];
    if (p < kBceClamp) p = kBceClamp;
    if (p > 1.0 - kBceClamp) p = 1.0 - kBceClamp;
    double t = target[i];
    s -= t * std::log(p) + (1.0 - t) * std::log1p(-p);
  }
  return s / static_cast<double>(count);
}

namespace detail {
template <typename T>
inline double xlogx(T v) {
  return v > T(0) ? static_cast<double>(v) * std::log(static_cast<double>(v))
                  : 0.0;
}
}  // namespace detail

// KL(q || Bern(0.5)) summed over units, in nats:
// sum_n [log 2 + sum_k q_nk log q_nk].
template <typename T>
double kl_uniform(const Tensor<T>& q) {
  if (q.shape.size() != 2 || q.cols() != 2)
    throw ShapeError("kl_uniform: q must be N x 2");
  double s = 0;
  for (int n = 0; n < q.rows(); ++n)
    s += std::log(2.0) + detail::xlogx(q(n, 0)) + detail::xlogx(q(n, 1));
  return s;
}

template <typename T>
double entropy(const Tensor<T>& q) {
  if (q.shape.size() != 2 || q.cols() != 2)
    throw ShapeError("entropy: q must be N x 2");
  double s = 0;
  for (int n = 0; n < q.rows(); ++n)
    s -= detail::xlogx(q(n, 0)) + detail::xlogx(q(n, 1));
  return s;
}

// alpha * sum_n z_n1: pushes true bits toward false.
template <typename T>
double zero_suppression_penalty(const Tensor<T>& z, double alpha) {
  if (alpha < 0) throw ParamError("zero_suppression_penalty: alpha < 0");
  if (z.shape.size() != 2 || z.cols() != 2)
    throw ShapeError("zero_suppression_penalty: z must be N x 2");
  double s = 0;
  for (int n = 0; n < z.rows(); ++n) s += static_cast<double>(z(n, 1));
  return alpha * s;
}

// alpha is inactive while epoch < warmup_fraction * total_epochs.
inline double effective_alpha(const LossVariant& v, int epoch,
                              int total_epochs) {
  if (v.kind != LossKind::ZSAE) return 0.0;
  if (static_cast<double>(epoch) < v.warmup_fraction * total_epochs)
    return 0.0;
  return v.alpha;
}

template <typename T>
double total_loss(const LossVariant& v, double rec, const Tensor<T>& q,
                  const Tensor<T>& z, int epoch, int total_epochs) {
  switch (v.kind) {
    case LossKind::NG:
      return rec + kl_uniform(q);
    case LossKind::SAE:
      return rec - kl_uniform(q);
    case LossKind::ZSAE:
      return rec - kl_uniform(q) +
             zero_suppression_penalty(z, effective_alpha(v, epoch, total_epochs));
  }
  throw ParamError("total_loss: unknown variant");
}

}  // namespace zsnn
