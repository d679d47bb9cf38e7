#pragma once

#include <cmath>
#include <numeric>
#include <vector>

#include "zsnn/errors.hpp"
#include "zsnn/image.hpp"
#include "zsnn/nn/adam.hpp"
#include "zsnn/nn/network.hpp"
#include "zsnn/rng.hpp"
#include "zsnn/sae/model.hpp"

namespace zsnn {

struct TrainConfig {
  int epochs = 200;
  int batch_size = 64;
  double lr = 1e-3;
};

struct EpochStats {
  double rec = 0, kl = 0, penalty = 0, tau = 0, total = 0;
};

template <typename T>
Tensor<T> images_to_tensor(const std::vector<Image>& images) {
  if (images.empty()) throw ParamError("images_to_tensor: empty list");
  const int P = static_cast<int>(images.front().px.size());
  Tensor<T> X(static_cast<int>(images.size()), P);
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (static_cast<int>(images[i].px.size()) != P)
      throw ShapeError("images_to_tensor: mixed image sizes");
    for (int j = 0; j < P; ++j)
      X.data[i * static_cast<std::size_t>(P) + j] =
          static_cast<T>(images[i].px[j]);
  }
  return X;
}

// One differentiable training-path evaluation at explicit Gumbel noise.
// Reconstruction flows through the sampled z; the KL term uses the
// noise-free class probabilities q = softmax(logits).
template <typename T>
struct SaeStep {
  double rec = 0, kl = 0, penalty = 0, total = 0;
  Gradients<T> enc_grads, dec_grads;
  Tensor<T> dlogits;  // d total / d encoder logits (B x 2N)
  Tensor<T> xhat;     // decoder output (B x P)
};

template <typename T>
SaeStep<T> sae_training_step(const Sae<T>& m, const Tensor<T>& X,
                             const Tensor<T>& noise, double tau,
                             double alpha_eff, Rng* dropout_rng) {
  validate_sae(m);
  const int B = X.rows();
  const int twoN = 2 * m.latent.N;
  const std::size_t pairs = static_cast<std::size_t>(B) * m.latent.N;
  if (noise.rows() != B || noise.cols() != twoN)
    throw ShapeError("sae_training_step: noise must be B x 2N");
  const bool training = dropout_rng != nullptr;

  auto enc_pass = forward(m.encoder, X, training, dropout_rng);
  const Tensor<T>& logits = enc_pass.output();

  Tensor<T> q(B, twoN);
  class_probs_flat(logits.data.data(), q.data.data(), pairs);
  Tensor<T> z(B, twoN);
  gumbel_softmax_fixed_flat(logits.data.data(), noise.data.data(),
                            z.data.data(), pairs, tau);

  auto dec_pass = forward(m.decoder, z, training, dropout_rng);
  const Tensor<T>& xhat = dec_pass.output();

  SaeStep<T> step;
  // Summed over pixels, averaged over the batch. Averaging over pixels too
  // would shrink this term by ~|image| relative to the unit-summed KL and
  // the optimizer settles on the mean image instead of a usable code.
  step.rec = bce_mean_flat(X.data.data(), xhat.data.data(), X.data.size()) *
             static_cast<double>(X.cols());

  // Per-sample KL summed over units, averaged over the batch. The per-pair
  // negative entropies are kept for the gradient below.
  std::vector<double> negent(pairs);
  double kl_sum = 0;
  for (std::size_t i = 0; i < pairs; ++i) {
    negent[i] = detail::xlogx(q.data[2 * i]) + detail::xlogx(q.data[2 * i + 1]);
    kl_sum += std::log(2.0) + negent[i];
  }
  step.kl = kl_sum / B;

  double zsum = 0;
  for (std::size_t i = 0; i < pairs; ++i) zsum += z.data[2 * i + 1];
  step.penalty = alpha_eff * zsum / B;

  const double kl_sign = m.variant.kind == LossKind::NG ? 1.0 : -1.0;
  step.total = step.rec + kl_sign * step.kl + step.penalty;

  // Decoder backward, BCE+sigmoid folded: d rec / d preact = (xhat - x)/B.
  Tensor<T> dpre(B, X.cols());
  const T scale = static_cast<T>(1.0 / static_cast<double>(B));
  for (std::size_t i = 0; i < X.data.size(); ++i)
    dpre.data[i] = (xhat.data[i] - X.data[i]) * scale;
  step.dec_grads = backward(m.decoder, dec_pass, dpre, true);

  // Into the latent: reconstruction path plus the zero-suppression term.
  Tensor<T> dz = step.dec_grads.input_grad;
  if (alpha_eff != 0) {
    const T bump = static_cast<T>(alpha_eff / B);
    for (std::size_t i = 0; i < pairs; ++i) dz.data[2 * i + 1] += bump;
  }

  step.dlogits = Tensor<T>(B, twoN);
  for (auto& v : step.dlogits.data) v = T(0);
  gumbel_softmax_backward_flat(z.data.data(), dz.data.data(),
                               step.dlogits.data.data(), pairs, tau);

  // KL path: d(sum_k q log q)/d logit_j = q_j (log q_j - sum_k q_k log q_k).
  const T kl_scale = static_cast<T>(kl_sign / B);
  for (std::size_t i = 0; i < pairs; ++i) {
    for (int j = 0; j < 2; ++j) {
      T qv = q.data[2 * i + j];
      if (qv > T(0))
        step.dlogits.data[2 * i + j] +=
            kl_scale * qv *
            (std::log(qv) - static_cast<T>(negent[i]));
    }
  }

  step.enc_grads = backward(m.encoder, enc_pass, step.dlogits);
  step.xhat = xhat;
  return step;
}

// Minibatch Adam over the summed objective; one Rng drives shuffling,
// dropout masks, and Gumbel draws, so a seed pins the whole run.
template <typename T>
std::vector<EpochStats> train(Sae<T>& m, const std::vector<Image>& images,
                              const TrainConfig& cfg, Rng& rng) {
  validate_sae(m);
  if (images.empty()) throw ParamError("train: empty dataset");
  if (cfg.epochs < 1 || cfg.batch_size < 1 || !(cfg.lr > 0))
    throw ParamError("train: bad config");
  Tensor<T> X_all = images_to_tensor<T>(images);
  if (X_all.cols() != m.pixels())
    throw ShapeError("train: image size does not match model");

  // Normalize each unit's logit gap over the training set: mean 0, std pulled
  // toward a fixed target. Only the within-pair gap matters to the latent
  // (softmax ignores the pair-common component), and the entropy flow
  // amplifies whatever lean a unit carries — at init the shared part of that
  // lean (w·E[h] through correlated features) dwarfs the per-input spread, so
  // an unnormalized unit saturates the same way for every input and its bit
  // carries no information. Repeated for the first third of a fresh run — the
  // same window where the zero-suppression penalty is held at zero — after
  // which the code is left to commit.
  auto normalize_gaps = [&]() {
    // ZSAE exits the window with softer gaps: once a unit saturates, the
    // zero-suppression gradient vanishes through the softmax, so the penalty
    // can only prune units that are still undecided when it switches on.
    const double target_sd = m.variant.kind == LossKind::ZSAE ? 1.0 : 4.0;
    auto& last = m.encoder.layers.back();
    auto pass = forward(m.encoder, X_all, false, nullptr);
    const Tensor<T>& logits = pass.output();
    const std::size_t rows = logits.rows();
    const std::size_t cols = last.B.size();
    for (std::size_t n = 0; n + 1 < cols; n += 2) {
      double s1 = 0, s2 = 0;
      for (std::size_t i = 0; i < rows; ++i) {
        double gap = double(logits.data[i * cols + n + 1]) -
                     double(logits.data[i * cols + n]);
        s1 += gap;
        s2 += gap * gap;
      }
      const double mean = s1 / rows;
      const double var = std::max(s2 / rows - mean * mean, 0.0);
      // Boost units whose spread lags the target; never shrink one that has
      // already grown an input-dependent gap.
      double c = target_sd / std::max(std::sqrt(var), 1e-8);
      c = std::clamp(c, 1.0, 4.0);
      // Scale the differential part of the pair's weights and bias, then
      // shift the bias so the scaled gap is centred.
      for (int k = 0; k < last.in; ++k) {
        T& w0 = last.W[static_cast<std::size_t>(k) * cols + n];
        T& w1 = last.W[static_cast<std::size_t>(k) * cols + n + 1];
        const T mid = static_cast<T>((w0 + w1) / 2);
        const T dif = static_cast<T>(c * (w1 - w0) / 2);
        w0 = mid - dif;
        w1 = mid + dif;
      }
      const T bmid = static_cast<T>((last.B[n] + last.B[n + 1]) / 2);
      T bdif = static_cast<T>(c * (last.B[n + 1] - last.B[n]) / 2);
      bdif -= static_cast<T>(c * mean / 2);
      last.B[n] = bmid - bdif;
      last.B[n + 1] = bmid + bdif;
    }
  };
  const bool fresh = m.trained_epochs == 0;
  const double recenter_frac = m.variant.kind == LossKind::ZSAE
                                   ? m.variant.warmup_fraction
                                   : 1.0 / 3.0;

  auto enc_params = param_arrays(m.encoder);
  auto dec_params = param_arrays(m.decoder);
  std::vector<std::vector<T>*> params = enc_params;
  params.insert(params.end(), dec_params.begin(), dec_params.end());
  auto adam = make_adam_state<T>(params, static_cast<T>(cfg.lr));

  const int count = X_all.rows();
  const int twoN = 2 * m.latent.N;
  std::vector<int> order(count);
  std::iota(order.begin(), order.end(), 0);

  std::vector<EpochStats> history;
  history.reserve(cfg.epochs);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double tau = anneal_tau(epoch, cfg.epochs, m.latent.tau);
    const double alpha_eff = effective_alpha(m.variant, epoch, cfg.epochs);
    if (fresh && epoch < recenter_frac * cfg.epochs) normalize_gaps();
    rng.shuffle(order);

    EpochStats stats;
    stats.tau = tau;
    double seen = 0;
    for (int start = 0; start < count; start += cfg.batch_size) {
      const int B = std::min(cfg.batch_size, count - start);
      Tensor<T> X(B, X_all.cols());
      for (int r = 0; r < B; ++r) {
        const T* src =
            X_all.data.data() +
            static_cast<std::size_t>(order[start + r]) * X_all.cols();
        std::copy(src, src + X_all.cols(),
                  X.data.data() + static_cast<std::size_t>(r) * X.cols());
      }
      Tensor<T> noise(B, twoN);
      for (auto& g : noise.data) g = static_cast<T>(rng.gumbel());

      auto step = sae_training_step(m, X, noise, tau, alpha_eff, &rng);
      if (!std::isfinite(step.total))
        throw TrainError("train: loss became non-finite", epoch);

      auto enc_g = grad_arrays(step.enc_grads);
      auto dec_g = grad_arrays(step.dec_grads);
      std::vector<const std::vector<T>*> grads = enc_g;
      grads.insert(grads.end(), dec_g.begin(), dec_g.end());
      adam_step(params, grads, adam);

      stats.rec += step.rec * B;
      stats.kl += step.kl * B;
      stats.penalty += step.penalty * B;
      stats.total += step.total * B;
      seen += B;
    }
    stats.rec /= seen;
    stats.kl /= seen;
    stats.penalty /= seen;
    stats.total /= seen;
    history.push_back(stats);
  }
  m.trained_epochs += cfg.epochs;
  return history;
}

}  // namespace zsnn
