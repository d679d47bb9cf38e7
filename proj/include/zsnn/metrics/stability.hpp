#pragma once

#include <cstdint>
#include <vector>

#include "zsnn/bitvec.hpp"
#include "zsnn/errors.hpp"
#include "zsnn/image.hpp"
#include "zsnn/rng.hpp"
#include "zsnn/sae/model.hpp"
#include "zsnn/worlds/noise.hpp"

namespace zsnn {

// One report cell: representation quality of a (variant, N, alpha) model
// family under a given noise level, median over seeds.
struct StabilityReport {
  std::string world;
  double mean_bit_variance = 0.0;
  int effective_bits = 0;
  double mse = 0.0;
  int n_latent = 0;
  LossVariant variant;
  NoiseSpec noise;
  std::vector<int> seeds;
};

namespace detail {

// Population variance of a 0/1 stream: p(1-p).
inline double population_variance(const std::vector<std::uint8_t>& bits) {
  if (bits.size() < 2) throw ParamError("population_variance: need >= 2 draws");
  double sum = 0;
  for (auto b : bits) sum += b;
  const double p = sum / static_cast<double>(bits.size());
  return p - p * p;
}

}  // namespace detail

// Mean over images and bits of the population variance of each latent bit
// across `trials` independently noised argmax encodings. Deterministic given
// the rng state; accumulation is plain left-to-right.
template <typename T>
double state_variance(const Sae<T>& m, const std::vector<Image>& images,
                      int trials, const NoiseSpec& noise, Rng& rng) {
  validate_sae(m);
  if (trials < 2) throw ParamError("state_variance: trials must be >= 2");
  if (images.empty()) throw ParamError("state_variance: no images");
  const int N = m.latent.N;
  double total = 0;
  for (const auto& img : images) {
    std::vector<std::vector<std::uint8_t>> per_bit(
        N, std::vector<std::uint8_t>());
    for (auto& v : per_bit) v.reserve(trials);
    for (int t = 0; t < trials; ++t) {
      BitVec b = encode_argmax(m, apply_noise(img, noise, rng));
      for (int n = 0; n < N; ++n) per_bit[n].push_back(b.bits[n]);
    }
    for (int n = 0; n < N; ++n) {
      double v = detail::population_variance(per_bit[n]);
      if (v > 0.25 + 1e-12)
        throw ContractError("state_variance: bit variance above 0.25");
      total += v;
    }
  }
  return total / (static_cast<double>(images.size()) * N);
}

// Number of bit positions that take both values somewhere in the code list.
inline int effective_bits_from_codes(const std::vector<BitVec>& codes) {
  if (codes.empty()) return 0;
  const std::size_t n = codes.front().size();
  int count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    bool seen0 = false, seen1 = false;
    for (const auto& c : codes) {
      if (c.size() != n)
        throw ShapeError("effective_bits: mixed code lengths");
      (c.bits[i] ? seen1 : seen0) = true;
      if (seen0 && seen1) {
        ++count;
        break;
      }
    }
  }
  return count;
}

template <typename T>
int effective_bits(const Sae<T>& m, const std::vector<Image>& images) {
  validate_sae(m);
  std::vector<BitVec> codes;
  codes.reserve(images.size());
  for (const auto& img : images) codes.push_back(encode_argmax(m, img));
  return effective_bits_from_codes(codes);
}

// Mean over images of the per-pixel squared reconstruction error after an
// argmax round trip.
template <typename T>
double reconstruction_mse(const Sae<T>& m, const std::vector<Image>& images) {
  validate_sae(m);
  if (images.empty()) throw ParamError("reconstruction_mse: no images");
  double total = 0;
  for (const auto& img : images) {
    Image rec = decode(m, encode_argmax(m, img));
    double s = 0;
    for (std::size_t i = 0; i < img.px.size(); ++i) {
      const double d = static_cast<double>(rec.px[i]) - img.px[i];
      s += d * d;
    }
    total += s / static_cast<double>(img.px.size());
  }
  return total / static_cast<double>(images.size());
}

}  // namespace zsnn
