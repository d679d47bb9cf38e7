#pragma once

#include <cmath>
#include <vector>

#include "zsnn/ama/oracle.hpp"
#include "zsnn/bitvec.hpp"
#include "zsnn/errors.hpp"
#include "zsnn/nn/adam.hpp"
#include "zsnn/nn/network.hpp"
#include "zsnn/rng.hpp"
#include "zsnn/sae/latent.hpp"
#include "zsnn/sae/loss.hpp"
#include "zsnn/sae/train.hpp"

namespace zsnn {

// Dense chain where a conditioning vector rides along: it is appended to
// the input of every layer, so layer i expects width_i + cond_dim inputs.
template <typename T>
struct CondNet {
  std::vector<DenseLayer<T>> layers;
  int cond_dim = 0;
};

template <typename T>
struct CondPass {
  std::vector<Tensor<T>> inputs;  // concatenated (B x (w + cond)) per layer
  std::vector<Tensor<T>> act;
  const Tensor<T>& output() const { return act.back(); }
};

template <typename T>
CondPass<T> cond_forward(const CondNet<T>& net, const Tensor<T>& x,
                         const Tensor<T>& cond) {
  if (net.layers.empty()) throw ShapeError("cond_forward: empty network");
  if (cond.cols() != net.cond_dim || cond.rows() != x.rows())
    throw ShapeError("cond_forward: conditioning shape mismatch");
  const int B = x.rows();
  CondPass<T> pass;
  Tensor<T> cur = x;
  for (const auto& l : net.layers) {
    const int w = cur.cols();
    if (l.in != w + net.cond_dim)
      throw ShapeError("cond_forward: layer width does not chain");
    Tensor<T> in(B, l.in);
    for (int r = 0; r < B; ++r) {
      for (int c = 0; c < w; ++c) in(r, c) = cur(r, c);
      for (int c = 0; c < net.cond_dim; ++c) in(r, w + c) = cond(r, c);
    }
    Tensor<T> z(B, l.out);
    detail::EMap<T>(z.data.data(), B, l.out).noalias() =
        detail::ECMap<T>(in.data.data(), B, l.in) *
        detail::ECMap<T>(l.W.data(), l.out, l.in).transpose();
    for (int r = 0; r < B; ++r)
      for (int c = 0; c < l.out; ++c) z(r, c) += l.B[c];
    detail::apply_act(l.act, z);
    pass.inputs.push_back(std::move(in));
    pass.act.push_back(z);
    cur = pass.act.back();
  }
  return pass;
}

template <typename T>
struct CondGrads {
  std::vector<LayerGrad<T>> layers;
  Tensor<T> dx;  // gradient w.r.t. the leading (non-conditioning) input
};

template <typename T>
CondGrads<T> cond_backward(const CondNet<T>& net, const CondPass<T>& pass,
                           const Tensor<T>& upstream,
                           bool last_is_preact = false) {
  if (pass.act.size() != net.layers.size())
    throw StateError("cond_backward: pass does not match network");
  if (upstream.shape != pass.act.back().shape)
    throw ShapeError("cond_backward: upstream shape mismatch");
  const int B = upstream.rows();
  CondGrads<T> g;
  g.layers.resize(net.layers.size());
  Tensor<T> up = upstream;
  for (int li = static_cast<int>(net.layers.size()) - 1; li >= 0; --li) {
    const auto& l = net.layers[li];
    Tensor<T> dz = up;
    const auto& a = pass.act[li];
    const bool skip =
        last_is_preact && li == static_cast<int>(net.layers.size()) - 1;
    if (!skip) {
      switch (l.act) {
        case Act::Linear:
          break;
        case Act::Relu:
          for (std::size_t i = 0; i < dz.data.size(); ++i)
            if (a.data[i] <= T(0)) dz.data[i] = T(0);
          break;
        case Act::Sigmoid:
          for (std::size_t i = 0; i < dz.data.size(); ++i)
            dz.data[i] *= a.data[i] * (T(1) - a.data[i]);
          break;
      }
    }
    auto& lg = g.layers[li];
    lg.dW.assign(l.W.size(), T(0));
    lg.dB.assign(l.B.size(), T(0));
    const auto& in = pass.inputs[li];
    detail::EMap<T>(lg.dW.data(), l.out, l.in).noalias() =
        detail::ECMap<T>(dz.data.data(), B, l.out).transpose() *
        detail::ECMap<T>(in.data.data(), B, l.in);
    for (int r = 0; r < B; ++r)
      for (int c = 0; c < l.out; ++c) lg.dB[c] += dz(r, c);

    Tensor<T> din(B, l.in);
    detail::EMap<T>(din.data.data(), B, l.in).noalias() =
        detail::ECMap<T>(dz.data.data(), B, l.out) *
        detail::ECMap<T>(l.W.data(), l.out, l.in);
    // Only the leading slice feeds the previous layer; the conditioning
    // columns are graph inputs.
    const int w = l.in - net.cond_dim;
    Tensor<T> lead(B, w);
    for (int r = 0; r < B; ++r)
      for (int c = 0; c < w; ++c) lead(r, c) = din(r, c);
    up = std::move(lead);
  }
  g.dx = std::move(up);
  return g;
}

namespace detail {

// Row-wise softmax over arbitrary width (max-subtracted).
template <typename T>
void softmax_rows(Tensor<T>& t) {
  const int B = t.rows(), W = t.cols();
  for (int r = 0; r < B; ++r) {
    T m = t(r, 0);
    for (int c = 1; c < W; ++c) m = std::max(m, t(r, c));
    T sum = T(0);
    for (int c = 0; c < W; ++c) {
      t(r, c) = std::exp(t(r, c) - m);
      sum += t(r, c);
    }
    for (int c = 0; c < W; ++c) t(r, c) /= sum;
  }
}

template <typename T>
Tensor<T> gumbel_softmax_rows_fixed(const Tensor<T>& logits,
                                    const Tensor<T>& noise, double tau) {
  if (tau <= 0) throw ParamError("gumbel_softmax: tau must be positive");
  if (noise.shape != logits.shape)
    throw ShapeError("gumbel_softmax: noise shape mismatch");
  Tensor<T> z = logits;
  for (std::size_t i = 0; i < z.data.size(); ++i)
    z.data[i] = static_cast<T>((z.data[i] + noise.data[i]) / tau);
  softmax_rows(z);
  return z;
}

// d loss / d logits for the row softmax: (1/tau) z_j (dz_j - sum_k dz_k z_k).
template <typename T>
void gumbel_softmax_rows_backward(const Tensor<T>& z, const Tensor<T>& dz,
                                  Tensor<T>& dlogits, double tau) {
  const int B = z.rows(), W = z.cols();
  for (int r = 0; r < B; ++r) {
    T dot = T(0);
    for (int c = 0; c < W; ++c) dot += dz(r, c) * z(r, c);
    for (int c = 0; c < W; ++c)
      dlogits(r, c) +=
          static_cast<T>((z(r, c) * (dz(r, c) - dot)) / tau);
  }
}

}  // namespace detail

// Action autoencoder: f(t, s) picks one of A labels through a single
// Gumbel-Softmax unit; g(onehot(a), s) rebuilds the successor state. The
// current state s conditions every layer of both halves.
template <typename T>
struct Aae {
  int A = 16;
  int N = 0;
  CondNet<T> encoder;  // t -> ... -> A logits (linear)
  CondNet<T> decoder;  // onehot(a) -> ... -> N sigmoids
  TauSchedule tau;
  int trained_epochs = 0;
};

using AaeModel = Aae<float>;

template <typename T>
void validate_aae(const Aae<T>& m) {
  if (m.A < 1 || m.N < 1) throw ShapeError("Aae: A and N must be positive");
  if (m.encoder.cond_dim != m.N || m.decoder.cond_dim != m.N)
    throw ShapeError("Aae: conditioning width must be N");
  if (m.encoder.layers.empty() || m.decoder.layers.empty())
    throw ShapeError("Aae: empty half");
  if (m.encoder.layers.front().in != 2 * m.N ||
      m.encoder.layers.back().out != m.A)
    throw ShapeError("Aae: encoder must map (t,s) to A logits");
  if (m.decoder.layers.front().in != m.A + m.N ||
      m.decoder.layers.back().out != m.N)
    throw ShapeError("Aae: decoder must map (onehot,s) to N bits");
}

template <typename T>
Aae<T> make_aae(int N, int A, Rng& rng, int hidden = 256) {
  if (N < 1) throw ParamError("make_aae: bad N");
  if (A < 1) throw ParamError("make_aae: bad A");
  Aae<T> m;
  m.N = N;
  m.A = A;
  m.encoder.cond_dim = m.decoder.cond_dim = N;
  auto build = [&](CondNet<T>& net, int x0, int out, Act last) {
    const std::vector<int> widths = {x0, hidden, hidden, out};
    const std::vector<Act> acts = {Act::Relu, Act::Relu, last};
    for (int i = 0; i < 3; ++i) {
      DenseLayer<T> l(widths[i] + N, widths[i + 1], acts[i]);
      init_glorot(l, rng);
      net.layers.push_back(std::move(l));
    }
  };
  build(m.encoder, N, A, Act::Linear);
  build(m.decoder, A, N, Act::Sigmoid);
  return m;
}

namespace detail {

inline Tensor<float> bits_rows(const std::vector<const BitVec*>& rows, int n) {
  Tensor<float> t(static_cast<int>(rows.size()), n);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (int c = 0; c < n; ++c) t(static_cast<int>(r), c) = rows[r]->bits[c];
  return t;
}

}  // namespace detail

template <typename T>
std::vector<std::vector<T>*> aae_params(Aae<T>& m) {
  std::vector<std::vector<T>*> out;
  for (auto* net : {&m.encoder, &m.decoder})
    for (auto& l : net->layers) {
      out.push_back(&l.W);
      out.push_back(&l.B);
    }
  return out;
}

struct AaeEpoch {
  double bce = 0;
  double tau = 0;
};

// Trains f and g jointly against BCE(t, g(f(t,s), s)) with the shared
// annealing machinery. The floor runs colder than the state autoencoder's:
// at evaluation time the decoder receives exact one-hots, so the latent has
// to be pushed near-discrete during training or the thresholded outputs
// drift from what the soft latent reconstructed. Returns the trained model;
// per-epoch stats go to *history when given.
inline AaeModel aae_train(const EncodedTransitions& enc, int A,
                          const TrainConfig& cfg, Rng& rng, int hidden = 256,
                          std::vector<AaeEpoch>* history = nullptr,
                          TauSchedule schedule = {5.0, 0.2}) {
  validate_transitions(enc);
  if (enc.pairs.empty()) throw ParamError("aae_train: no transitions");
  if (A < 2) throw ParamError("aae_train: A must be >= 2");
  if (cfg.epochs < 1 || cfg.batch_size < 1 || !(cfg.lr > 0))
    throw ParamError("aae_train: bad config");

  const int N = enc.n_bits;
  AaeModel m = make_aae<float>(N, A, rng, hidden);
  m.tau = schedule;
  auto params = aae_params(m);
  auto adam = make_adam_state(params, static_cast<float>(cfg.lr));

  std::vector<std::size_t> order(enc.pairs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double tau = anneal_tau(epoch, cfg.epochs, m.tau);
    rng.shuffle(order);
    double epoch_bce = 0;
    std::size_t seen = 0;
    for (std::size_t start = 0; start < order.size();
         start += cfg.batch_size) {
      const std::size_t stop =
          std::min(order.size(), start + cfg.batch_size);
      const int B = static_cast<int>(stop - start);
      std::vector<const BitVec*> s_rows, t_rows;
      for (std::size_t i = start; i < stop; ++i) {
        s_rows.push_back(&enc.pairs[order[i]].first);
        t_rows.push_back(&enc.pairs[order[i]].second);
      }
      Tensor<float> S = detail::bits_rows(s_rows, N);
      Tensor<float> Tt = detail::bits_rows(t_rows, N);

      auto enc_pass = cond_forward(m.encoder, Tt, S);
      Tensor<float> noise(B, A);
      for (auto& g : noise.data) g = static_cast<float>(rng.gumbel());
      Tensor<float> z =
          detail::gumbel_softmax_rows_fixed(enc_pass.output(), noise, tau);
      auto dec_pass = cond_forward(m.decoder, z, S);
      const auto& that = dec_pass.output();

      const double bce =
          bce_mean_flat(Tt.data.data(), that.data.data(), Tt.data.size());
      if (!std::isfinite(bce))
        throw TrainError("aae_train: loss became non-finite", epoch);
      epoch_bce += bce * B;
      seen += B;

      Tensor<float> dpre(B, N);
      const float inv = 1.0f / static_cast<float>(Tt.data.size());
      for (std::size_t i = 0; i < dpre.data.size(); ++i)
        dpre.data[i] = (that.data[i] - Tt.data[i]) * inv;
      auto dec_g = cond_backward(m.decoder, dec_pass, dpre, true);
      Tensor<float> dlogits(B, A, 0.0f);
      detail::gumbel_softmax_rows_backward(z, dec_g.dx, dlogits, tau);
      auto enc_g = cond_backward(m.encoder, enc_pass, dlogits, false);

      std::vector<const std::vector<float>*> grads;
      for (const auto* half : {&enc_g, &dec_g})
        for (const auto& lg : half->layers) {
          grads.push_back(&lg.dW);
          grads.push_back(&lg.dB);
        }
      adam_step(params, grads, adam);
    }
    if (history) history->push_back({epoch_bce / seen, tau});
  }
  m.trained_epochs = cfg.epochs;
  return m;
}

// Noise-free action assignment: argmax over the A logits of f(t, s).
template <typename T>
int aae_action(const Aae<T>& m, const BitVec& s, const BitVec& t) {
  validate_aae(m);
  if (static_cast<int>(s.size()) != m.N || static_cast<int>(t.size()) != m.N)
    throw ShapeError("aae_action: bit length != N");
  auto S = detail::bits_rows({&s}, m.N);
  auto Tt = detail::bits_rows({&t}, m.N);
  auto pass = cond_forward(m.encoder, Tt, S);
  const auto& logits = pass.output();
  int best = 0;
  for (int a = 1; a < m.A; ++a)
    if (logits(0, a) > logits(0, best)) best = a;
  return best;
}

// Noise-free class probabilities of the action unit (rows sum to one).
template <typename T>
std::vector<double> aae_action_probs(const Aae<T>& m, const BitVec& s,
                                     const BitVec& t) {
  validate_aae(m);
  auto S = detail::bits_rows({&s}, m.N);
  auto Tt = detail::bits_rows({&t}, m.N);
  auto pass = cond_forward(m.encoder, Tt, S);
  Tensor<T> q = pass.output();
  detail::softmax_rows(q);
  return std::vector<double>(q.data.begin(), q.data.end());
}

// g(onehot(a), s) thresholded at 0.5 per bit.
template <typename T>
BitVec aae_apply(const Aae<T>& m, const BitVec& s, int a) {
  validate_aae(m);
  if (static_cast<int>(s.size()) != m.N)
    throw ShapeError("aae_apply: bit length != N");
  if (a < 0 || a >= m.A) throw ParamError("aae_apply: action out of range");
  Tensor<T> onehot(1, m.A, T(0));
  onehot.data[a] = T(1);
  auto S = detail::bits_rows({&s}, m.N);
  auto pass = cond_forward(m.decoder, onehot, S);
  BitVec out;
  out.bits.resize(m.N);
  for (int n = 0; n < m.N; ++n)
    out.bits[n] = pass.output()(0, n) > T(0.5) ? 1 : 0;
  return out;
}

// Fraction of bits reproduced by the f-then-g round trip over the pairs.
template <typename T>
double aae_roundtrip_accuracy(const Aae<T>& m, const EncodedTransitions& enc) {
  validate_transitions(enc);
  if (enc.pairs.empty()) throw ParamError("aae_roundtrip_accuracy: no pairs");
  std::size_t hits = 0, bits = 0;
  for (const auto& [s, t] : enc.pairs) {
    BitVec that = aae_apply(m, s, aae_action(m, s, t));
    for (int n = 0; n < m.N; ++n) hits += that.bits[n] == t.bits[n];
    bits += m.N;
  }
  return static_cast<double>(hits) / static_cast<double>(bits);
}

}  // namespace zsnn
