#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstddef>
#include <vector>

#include "zsnn/errors.hpp"
#include "zsnn/nn/tensor.hpp"
#include "zsnn/rng.hpp"

namespace zsnn {

enum class Act { Linear, Relu, Sigmoid };

/// One fully-connected layer. W is out x in, row-major; forward computes
/// act(x W^T + B). Matrix products are evaluated through Eigen maps over
/// these flat arrays.
template <typename T>
struct DenseLayer {
  int in = 0;
  int out = 0;
  std::vector<T> W;
  std::vector<T> B;
  Act act = Act::Linear;

  DenseLayer() = default;
  DenseLayer(int in_, int out_, Act act_) : in(in_), out(out_), act(act_) {
    W.assign(static_cast<std::size_t>(in) * out, T(0));
    B.assign(static_cast<std::size_t>(out), T(0));
  }
};

/// Glorot-uniform init: W ~ U(+-sqrt(6/(in+out))), B = 0.
template <typename T>
void init_glorot(DenseLayer<T>& layer, Rng& rng) {
  double bound = std::sqrt(6.0 / (layer.in + layer.out));
  for (auto& w : layer.W) w = static_cast<T>(rng.uniform(-bound, bound));
  for (auto& b : layer.B) b = T(0);
}

/// An ordered dense-layer chain. dropout_rate applies between hidden layers
/// (to every layer output except the last) during training only,
/// inverted-dropout style.
template <typename T>
struct Network {
  std::vector<DenseLayer<T>> layers;
  T dropout_rate = T(0);

  int in_dim() const { return layers.empty() ? 0 : layers.front().in; }
  int out_dim() const { return layers.empty() ? 0 : layers.back().out; }
};

template <typename T>
Network<T> make_network(const std::vector<int>& dims, const std::vector<Act>& acts,
                        Rng& rng, T dropout_rate = T(0)) {
  if (dims.size() < 2 || acts.size() != dims.size() - 1)
    throw ShapeError("make_network: dims/acts mismatch");
  Network<T> net;
  net.dropout_rate = dropout_rate;
  for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
    DenseLayer<T> l(dims[i], dims[i + 1], acts[i]);
    init_glorot(l, rng);
    net.layers.push_back(std::move(l));
  }
  return net;
}

template <typename T>
void validate_chain(const Network<T>& net) {
  for (std::size_t i = 0; i + 1 < net.layers.size(); ++i)
    if (net.layers[i].out != net.layers[i + 1].in)
      throw ShapeError("Network: adjacent layer dimensions do not chain");
}

namespace detail {
template <typename T>
using EMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using EMap = Eigen::Map<EMat<T>>;
template <typename T>
using ECMap = Eigen::Map<const EMat<T>>;

template <typename T>
void apply_act(Act act, Tensor<T>& t) {
  switch (act) {
    case Act::Linear:
      break;
    case Act::Relu:
      for (auto& v : t.data) v = v > T(0) ? v : T(0);
      break;
    case Act::Sigmoid:
      for (auto& v : t.data) v = T(1) / (T(1) + std::exp(-v));
      break;
  }
}
}  // namespace detail

/// Everything backward() needs, captured during forward().
template <typename T>
struct ForwardPass {
  Tensor<T> input;
  std::vector<Tensor<T>> inputs;    // actual (post-dropout) input to each layer
  std::vector<Tensor<T>> act;       // per-layer activations
  std::vector<Tensor<T>> dropmask;  // per-layer output mask; empty tensor if none
  bool training = false;

  const Tensor<T>& output() const { return act.back(); }
};

/// Runs the batch through the chain. rng is consumed only when training with
/// a nonzero dropout rate.
template <typename T>
ForwardPass<T> forward(const Network<T>& net, const Tensor<T>& batch, bool training,
                       Rng* rng = nullptr) {
  validate_chain(net);
  if (net.layers.empty()) throw ShapeError("forward: empty network");
  if (batch.shape.size() != 2 || batch.cols() != net.layers.front().in)
    throw ShapeError("forward: batch width does not match first layer input");
  bool drop = training && net.dropout_rate > T(0);
  if (drop && rng == nullptr)
    throw ParamError("forward: dropout requires an rng in training mode");

  ForwardPass<T> pass;
  pass.input = batch;
  pass.training = training;
  const int B = batch.rows();
  Tensor<T> cur = batch;
  for (std::size_t li = 0; li < net.layers.size(); ++li) {
    const auto& l = net.layers[li];
    pass.inputs.push_back(cur);
    Tensor<T> z(B, l.out);
    detail::EMap<T>(z.data.data(), B, l.out).noalias() =
        detail::ECMap<T>(cur.data.data(), B, l.in) *
        detail::ECMap<T>(l.W.data(), l.out, l.in).transpose();
    for (int r = 0; r < B; ++r)
      for (int c = 0; c < l.out; ++c) z(r, c) += l.B[c];
    detail::apply_act(l.act, z);
    pass.act.push_back(z);

    // Masks sit strictly between hidden layers: the first layer's output is
    // the first hidden activation, and the final layer's input is never
    // dropped, so the output layer always sees the full feature vector.
    bool mask_here = drop && li + 2 < net.layers.size();
    if (mask_here) {
      Tensor<T> mask(B, l.out);
      T keep = T(1) - net.dropout_rate;
      T scale = T(1) / keep;
      for (auto& m : mask.data)
        m = (rng->uniform() < static_cast<double>(keep)) ? scale : T(0);
      Tensor<T> dropped = z;
      for (std::size_t i = 0; i < dropped.data.size(); ++i)
        dropped.data[i] *= mask.data[i];
      pass.dropmask.push_back(std::move(mask));
      cur = std::move(dropped);
    } else {
      pass.dropmask.emplace_back();
      cur = z;
    }
  }
  return pass;
}

template <typename T>
struct LayerGrad {
  std::vector<T> dW;
  std::vector<T> dB;
};

template <typename T>
struct Gradients {
  std::vector<LayerGrad<T>> layers;
  Tensor<T> input_grad;
};

/// Backpropagates upstream (dLoss/dOutput, same shape as the final
/// activation) through the recorded pass. With last_is_preact the upstream
/// is taken w.r.t. the last layer's pre-activation instead — the caller has
/// already folded in the output nonlinearity (e.g. the sigmoid+BCE shortcut,
/// which avoids the 0*inf trap when the sigmoid saturates in float).
template <typename T>
Gradients<T> backward(const Network<T>& net, const ForwardPass<T>& pass,
                      const Tensor<T>& upstream, bool last_is_preact = false) {
  if (pass.act.size() != net.layers.size())
    throw StateError("backward: pass does not match network");
  const auto& out = pass.act.back();
  if (upstream.shape != out.shape)
    throw ShapeError("backward: upstream gradient shape mismatch");

  const int B = upstream.rows();
  Gradients<T> g;
  g.layers.resize(net.layers.size());
  Tensor<T> up = upstream;
  for (int li = static_cast<int>(net.layers.size()) - 1; li >= 0; --li) {
    const auto& l = net.layers[li];
    Tensor<T> dz = up;
    const auto& a = pass.act[li];
    const bool skip_act =
        last_is_preact && li == static_cast<int>(net.layers.size()) - 1;
    if (!skip_act) {
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
    if (li > 0 && pass.dropmask[li - 1].data.size() == din.data.size())
      for (std::size_t i = 0; i < din.data.size(); ++i)
        din.data[i] *= pass.dropmask[li - 1].data[i];
    up = std::move(din);
  }
  g.input_grad = std::move(up);
  return g;
}

/// Parameter arrays in a fixed order: per layer, W then B. Used by the
/// optimizer and by persistence.
template <typename T>
std::vector<std::vector<T>*> param_arrays(Network<T>& net) {
  std::vector<std::vector<T>*> out;
  for (auto& l : net.layers) {
    out.push_back(&l.W);
    out.push_back(&l.B);
  }
  return out;
}

template <typename T>
std::vector<const std::vector<T>*> grad_arrays(const Gradients<T>& g) {
  std::vector<const std::vector<T>*> out;
  for (auto& l : g.layers) {
    out.push_back(&l.dW);
    out.push_back(&l.dB);
  }
  return out;
}

}  // namespace zsnn
