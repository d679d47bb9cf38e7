#pragma once

#include <vector>

#include "zsnn/bitvec.hpp"
#include "zsnn/errors.hpp"
#include "zsnn/image.hpp"
#include "zsnn/nn/network.hpp"
#include "zsnn/rng.hpp"
#include "zsnn/sae/latent.hpp"
#include "zsnn/sae/loss.hpp"

namespace zsnn {

// State autoencoder: image -> 2N logits -> N binary units -> image.
template <typename T>
struct Sae {
  Network<T> encoder;  // pixels -> ... -> 2N logits (linear)
  Network<T> decoder;  // 2N one-hot pairs -> ... -> pixels (sigmoid)
  LatentConfig latent;
  LossVariant variant;
  int trained_epochs = 0;
  int img_w = 0, img_h = 0;

  int pixels() const { return img_w * img_h; }
};

using SaeModel = Sae<float>;

template <typename T>
void validate_sae(const Sae<T>& m) {
  validate_latent(m.latent);
  if (m.img_w <= 0 || m.img_h <= 0)
    throw ShapeError("Sae: image dimensions unset");
  if (m.encoder.in_dim() != m.pixels() || m.decoder.out_dim() != m.pixels())
    throw ShapeError("Sae: network pixel dimensions do not match image");
  if (m.encoder.out_dim() != 2 * m.latent.N ||
      m.decoder.in_dim() != 2 * m.latent.N)
    throw ShapeError("Sae: latent width must be 2N on both networks");
}

template <typename T>
Sae<T> make_sae(int img_w, int img_h, const LatentConfig& latent,
                const LossVariant& variant, Rng& rng, int hidden = 400,
                T dropout = T(0.4)) {
  validate_latent(latent);
  if (img_w <= 0 || img_h <= 0) throw ParamError("make_sae: bad image dims");
  if (hidden < 1) throw ParamError("make_sae: bad hidden width");
  Sae<T> m;
  m.latent = latent;
  m.variant = variant;
  m.img_w = img_w;
  m.img_h = img_h;
  const int P = img_w * img_h;
  const int twoN = 2 * latent.N;
  m.encoder = make_network<T>({P, hidden, hidden, twoN},
                              {Act::Relu, Act::Relu, Act::Linear}, rng, dropout);
  m.decoder = make_network<T>({twoN, hidden, hidden, P},
                              {Act::Relu, Act::Relu, Act::Sigmoid}, rng, dropout);
  return m;
}

namespace detail {

template <typename T>
Tensor<T> image_row(const Image& img) {
  Tensor<T> t(1, static_cast<int>(img.px.size()));
  for (std::size_t i = 0; i < img.px.size(); ++i)
    t.data[i] = static_cast<T>(img.px[i]);
  return t;
}

template <typename T>
Tensor<T> encoder_logits(const Sae<T>& m, const Image& img) {
  if (img.width != m.img_w || img.height != m.img_h)
    throw ShapeError("encode: image dimensions do not match model");
  auto pass = forward(m.encoder, image_row<T>(img), false);
  Tensor<T> logits(m.latent.N, 2);
  logits.data = pass.output().data;
  return logits;
}

}  // namespace detail

// Deterministic evaluation-time encoding: b_n = z_n1 after row-wise argmax.
template <typename T>
BitVec encode_argmax(const Sae<T>& m, const Image& img) {
  validate_sae(m);
  auto logits = detail::encoder_logits(m, img);
  auto z = argmax_activation(logits);
  BitVec b;
  b.bits.resize(m.latent.N);
  for (int n = 0; n < m.latent.N; ++n)
    b.bits[n] = z(n, 1) > T(0.5) ? 1 : 0;
  return b;
}

// Training-style stochastic encoding at temperature tau.
template <typename T>
BitVec encode_sample(const Sae<T>& m, const Image& img, double tau, Rng& rng) {
  validate_sae(m);
  auto logits = detail::encoder_logits(m, img);
  auto z = gumbel_softmax(logits, tau, rng);
  BitVec b;
  b.bits.resize(m.latent.N);
  for (int n = 0; n < m.latent.N; ++n)
    b.bits[n] = z(n, 1) > z(n, 0) ? 1 : 0;
  return b;
}

// b expands to one-hot pairs (1-b_n, b_n); decoder output is the image.
template <typename T>
Image decode(const Sae<T>& m, const BitVec& b) {
  validate_sae(m);
  if (static_cast<int>(b.size()) != m.latent.N)
    throw ShapeError("decode: bit vector length != N");
  Tensor<T> z(1, 2 * m.latent.N);
  for (int n = 0; n < m.latent.N; ++n) {
    z.data[2 * n] = b.bits[n] ? T(0) : T(1);
    z.data[2 * n + 1] = b.bits[n] ? T(1) : T(0);
  }
  auto pass = forward(m.decoder, z, false);
  Image img(m.img_w, m.img_h);
  for (std::size_t i = 0; i < img.px.size(); ++i)
    img.px[i] = static_cast<float>(pass.output().data[i]);
  return img;
}

// Flat parameter snapshot: encoder layers then decoder layers, each layer W
// (row-major) then B. The reverse exactly refills a structurally identical
// model.
template <typename T>
std::vector<T> serialize_params(const Sae<T>& m) {
  std::vector<T> out;
  for (const Network<T>* net : {&m.encoder, &m.decoder})
    for (const auto& l : net->layers) {
      out.insert(out.end(), l.W.begin(), l.W.end());
      out.insert(out.end(), l.B.begin(), l.B.end());
    }
  return out;
}

template <typename T>
void deserialize_params(Sae<T>& m, const std::vector<T>& flat) {
  std::size_t pos = 0;
  for (Network<T>* net : {&m.encoder, &m.decoder})
    for (auto& l : net->layers) {
      if (pos + l.W.size() + l.B.size() > flat.size())
        throw IntegrityError("deserialize_params: flat array too short");
      std::copy(flat.begin() + pos, flat.begin() + pos + l.W.size(),
                l.W.begin());
      pos += l.W.size();
      std::copy(flat.begin() + pos, flat.begin() + pos + l.B.size(),
                l.B.begin());
      pos += l.B.size();
    }
  if (pos != flat.size())
    throw IntegrityError("deserialize_params: flat array too long");
}

}  // namespace zsnn
