#pragma once

#include <algorithm>
#include <set>
#include <utility>
#include <vector>

#include "zsnn/ama/oracle.hpp"
#include "zsnn/bitvec.hpp"
#include "zsnn/errors.hpp"
#include "zsnn/nn/adam.hpp"
#include "zsnn/nn/network.hpp"
#include "zsnn/rng.hpp"
#include "zsnn/sae/loss.hpp"
#include "zsnn/sae/train.hpp"

namespace zsnn {

// Action discriminator: is (s, t) a transition the world allows?
template <typename T>
struct Ad {
  Network<T> net;  // concat(s, t) -> single sigmoid score
  int n_bits = 0;
  int trained_epochs = 0;
};

using AdModel = Ad<float>;

template <typename T>
void validate_ad(const Ad<T>& m) {
  if (m.n_bits < 1) throw ShapeError("Ad: n_bits unset");
  if (m.net.in_dim() != 2 * m.n_bits || m.net.out_dim() != 1)
    throw ShapeError("Ad: classifier must map 2N bits to one score");
}

template <typename T>
Ad<T> make_ad(int N, Rng& rng, int hidden = 256) {
  if (N < 1) throw ParamError("make_ad: bad N");
  Ad<T> m;
  m.n_bits = N;
  m.net = make_network<T>({2 * N, hidden, hidden, 1},
                          {Act::Relu, Act::Relu, Act::Sigmoid}, rng, T(0));
  return m;
}

// Uniform rejection sampling of non-transitions: for every observed (s, t),
// `ratio` draws of (s, t') with t' from the pool and (s, t') not observed.
inline std::vector<std::pair<BitVec, BitVec>> negative_sampling(
    const EncodedTransitions& enc, const std::vector<BitVec>& state_pool,
    Rng& rng, int ratio = 1) {
  validate_transitions(enc);
  if (enc.pairs.empty()) throw ParamError("negative_sampling: no positives");
  if (ratio < 1) throw ParamError("negative_sampling: ratio must be >= 1");
  if (state_pool.empty()) throw ParamError("negative_sampling: empty pool");
  std::set<std::pair<BitVec, BitVec>> observed(enc.pairs.begin(),
                                               enc.pairs.end());
  std::vector<std::pair<BitVec, BitVec>> out;
  out.reserve(enc.pairs.size() * ratio);
  const int kMaxAttempts = 1000;
  for (const auto& [s, t] : enc.pairs) {
    for (int r = 0; r < ratio; ++r) {
      bool placed = false;
      for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        const BitVec& cand = state_pool[rng.below(state_pool.size())];
        if (!observed.count({s, cand})) {
          out.emplace_back(s, cand);
          placed = true;
          break;
        }
      }
      if (!placed)
        throw ResourceError(
            "negative_sampling: pool cannot supply a non-transition");
    }
  }
  return out;
}

namespace detail {

inline Tensor<float> pair_rows(
    const std::vector<const std::pair<BitVec, BitVec>*>& rows, int n) {
  Tensor<float> t(static_cast<int>(rows.size()), 2 * n);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (int c = 0; c < n; ++c) {
      t(static_cast<int>(r), c) = rows[r]->first.bits[c];
      t(static_cast<int>(r), n + c) = rows[r]->second.bits[c];
    }
  }
  return t;
}

}  // namespace detail

// BCE-trained binary classifier over labeled pairs.
inline AdModel ad_train(const std::vector<std::pair<BitVec, BitVec>>& positives,
                        const std::vector<std::pair<BitVec, BitVec>>& negatives,
                        const TrainConfig& cfg, Rng& rng, int hidden = 256,
                        std::vector<double>* history = nullptr) {
  if (positives.empty() || negatives.empty())
    throw ParamError("ad_train: both classes must be nonempty");
  if (cfg.epochs < 1 || cfg.batch_size < 1 || !(cfg.lr > 0))
    throw ParamError("ad_train: bad config");
  const int N = static_cast<int>(positives.front().first.size());
  for (const auto* cls : {&positives, &negatives})
    for (const auto& [s, t] : *cls)
      if (static_cast<int>(s.size()) != N || static_cast<int>(t.size()) != N)
        throw ShapeError("ad_train: mixed bit lengths");

  AdModel m = make_ad<float>(N, rng, hidden);
  auto params = param_arrays(m.net);
  auto adam = make_adam_state(params, static_cast<float>(cfg.lr));

  struct Row {
    const std::pair<BitVec, BitVec>* pair;
    float label;
  };
  std::vector<Row> rows;
  rows.reserve(positives.size() + negatives.size());
  for (const auto& p : positives) rows.push_back({&p, 1.0f});
  for (const auto& p : negatives) rows.push_back({&p, 0.0f});

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(rows);
    double epoch_bce = 0;
    std::size_t seen = 0;
    for (std::size_t start = 0; start < rows.size();
         start += cfg.batch_size) {
      const std::size_t stop = std::min(rows.size(), start + cfg.batch_size);
      const int B = static_cast<int>(stop - start);
      std::vector<const std::pair<BitVec, BitVec>*> batch;
      Tensor<float> y(B, 1);
      for (std::size_t i = start; i < stop; ++i) {
        batch.push_back(rows[i].pair);
        y(static_cast<int>(i - start), 0) = rows[i].label;
      }
      Tensor<float> X = detail::pair_rows(batch, N);
      auto pass = forward(m.net, X, false);
      const auto& score = pass.output();
      const double bce =
          bce_mean_flat(y.data.data(), score.data.data(), y.data.size());
      if (!std::isfinite(bce))
        throw TrainError("ad_train: loss became non-finite", epoch);
      epoch_bce += bce * B;
      seen += B;
      Tensor<float> dpre(B, 1);
      const float inv = 1.0f / static_cast<float>(B);
      for (int r = 0; r < B; ++r)
        dpre(r, 0) = (score(r, 0) - y(r, 0)) * inv;
      auto g = backward(m.net, pass, dpre, true);
      auto grads = grad_arrays(g);
      adam_step(params, grads, adam);
    }
    if (history) history->push_back(epoch_bce / seen);
  }
  m.trained_epochs += cfg.epochs;
  return m;
}

// Pure, deterministic score in [0,1].
template <typename T>
double ad_score(const Ad<T>& m, const BitVec& s, const BitVec& t) {
  validate_ad(m);
  if (static_cast<int>(s.size()) != m.n_bits ||
      static_cast<int>(t.size()) != m.n_bits)
    throw ShapeError("ad_score: bit length != N");
  std::pair<BitVec, BitVec> p{s, t};
  auto X = detail::pair_rows({&p}, m.n_bits);
  auto pass = forward(m.net, X, false);
  return static_cast<double>(pass.output()(0, 0));
}

template <typename T>
double ad_accuracy(const Ad<T>& m,
                   const std::vector<std::pair<BitVec, BitVec>>& positives,
                   const std::vector<std::pair<BitVec, BitVec>>& negatives,
                   double threshold = 0.5) {
  std::size_t hits = 0;
  for (const auto& [s, t] : positives) hits += ad_score(m, s, t) >= threshold;
  for (const auto& [s, t] : negatives) hits += ad_score(m, s, t) < threshold;
  const std::size_t total = positives.size() + negatives.size();
  if (total == 0) throw ParamError("ad_accuracy: no pairs");
  return static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace zsnn
