#pragma once

#include <algorithm>
#include <set>
#include <utility>
#include <vector>

#include "zsnn/errors.hpp"
#include "zsnn/sae/model.hpp"

namespace zsnn {

// Indices n with b_n == 0 for every given image under argmax encoding.
template <typename T>
std::vector<int> find_constant_bits(const Sae<T>& m,
                                    const std::vector<Image>& images) {
  if (images.empty()) throw ParamError("find_constant_bits: empty image list");
  std::vector<char> ever_on(m.latent.N, 0);
  for (const auto& img : images) {
    BitVec b = encode_argmax(m, img);
    for (int n = 0; n < m.latent.N; ++n)
      if (b.bits[n]) ever_on[n] = 1;
  }
  std::vector<int> out;
  for (int n = 0; n < m.latent.N; ++n)
    if (!ever_on[n]) out.push_back(n);
  return out;
}

struct PruneReport {
  int delta_n = 0;
  // Encoder last layer: each dropped unit takes its weight row and bias.
  long long floats_removed_prev = 0;
  // Decoder first layer: 2*L*delta_n weights (bias is folded, not removed).
  long long floats_removed_next = 0;
  long long total_before = 0;
  long long total_after = 0;
};

namespace detail {

template <typename T>
long long param_count(const Sae<T>& m) {
  long long c = 0;
  for (const Network<T>* net : {&m.encoder, &m.decoder})
    for (const auto& l : net->layers)
      c += static_cast<long long>(l.W.size()) + static_cast<long long>(l.B.size());
  return c;
}

}  // namespace detail

// Removes constant-false units. A dead unit always presents one-hot (1,0) to
// the decoder, so its category-0 weight column is a constant contribution:
// fold W_{n0l} into B_l, then delete both of the unit's columns there and
// its two logit rows on the encoder side. When probe images are supplied,
// every listed unit is re-checked against them first.
template <typename T>
std::pair<Sae<T>, PruneReport> prune(const Sae<T>& m,
                                     const std::vector<int>& dead,
                                     const std::vector<Image>& probe = {}) {
  validate_sae(m);
  const int N = m.latent.N;
  std::set<int> dead_set(dead.begin(), dead.end());
  for (int n : dead_set)
    if (n < 0 || n >= N) throw ParamError("prune: dead index out of range");
  if (static_cast<int>(dead_set.size()) == N)
    throw ParamError("prune: cannot remove every unit");

  for (const auto& img : probe) {
    BitVec b = encode_argmax(m, img);
    for (int n : dead_set)
      if (b.bits[n])
        throw ContractError("prune: unit " + std::to_string(n) +
                            " is not constant-false on the probe set");
  }

  PruneReport rep;
  rep.delta_n = static_cast<int>(dead_set.size());
  rep.total_before = detail::param_count(m);

  Sae<T> out = m;
  if (rep.delta_n == 0) {
    rep.total_after = rep.total_before;
    return {std::move(out), rep};
  }

  std::vector<int> kept;
  for (int n = 0; n < N; ++n)
    if (!dead_set.count(n)) kept.push_back(n);
  const int K = static_cast<int>(kept.size());

  // Encoder last layer: keep the two logit rows of every surviving unit.
  {
    auto& l = out.encoder.layers.back();
    std::vector<T> W(static_cast<std::size_t>(2 * K) * l.in);
    std::vector<T> B(static_cast<std::size_t>(2 * K));
    for (int i = 0; i < K; ++i)
      for (int half = 0; half < 2; ++half) {
        const int src = 2 * kept[i] + half, dst = 2 * i + half;
        std::copy(l.W.begin() + static_cast<std::size_t>(src) * l.in,
                  l.W.begin() + static_cast<std::size_t>(src + 1) * l.in,
                  W.begin() + static_cast<std::size_t>(dst) * l.in);
        B[dst] = l.B[src];
      }
    rep.floats_removed_prev =
        static_cast<long long>(l.in + 1) * (2LL * rep.delta_n);
    l.W = std::move(W);
    l.B = std::move(B);
    l.out = 2 * K;
  }

  // Decoder first layer: fold dead category-0 columns into the bias, then
  // drop both columns of every dead unit.
  {
    auto& l = out.decoder.layers.front();
    for (int r = 0; r < l.out; ++r) {
      T add = T(0);
      for (int n : dead_set)
        add += l.W[static_cast<std::size_t>(r) * l.in + 2 * n];
      l.B[r] += add;
    }
    std::vector<T> W(static_cast<std::size_t>(l.out) * 2 * K);
    for (int r = 0; r < l.out; ++r)
      for (int i = 0; i < K; ++i)
        for (int half = 0; half < 2; ++half)
          W[(static_cast<std::size_t>(r) * 2 * K) + 2 * i + half] =
              l.W[static_cast<std::size_t>(r) * l.in + 2 * kept[i] + half];
    rep.floats_removed_next =
        static_cast<long long>(l.out) * (2LL * rep.delta_n);
    l.W = std::move(W);
    l.in = 2 * K;
  }

  out.latent.N = K;
  rep.total_after = detail::param_count(out);
  return {std::move(out), rep};
}

}  // namespace zsnn
