#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace zsnn {

/// Deterministic random stream: PCG32 (oneseq variant, O'Neill 2014).
///
/// The generator is fixed by this file, not by the standard library, so a
/// seed produces the identical stream on every platform. Uniform doubles
/// take 53 bits from two consecutive 32-bit outputs; normals use Box-Muller
/// on those uniforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0x853c49e6748fea9bULL) { reseed(seed); }

  void reseed(std::uint64_t seed) {
    state_ = 0;
    next_u32();
    state_ += seed;
    next_u32();
  }

  std::uint32_t next_u32() {
    std::uint64_t old = state_;
    state_ = old * 6364136223846793005ULL + kIncrement;
    std::uint32_t xorshifted =
        static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
    std::uint32_t rot = static_cast<std::uint32_t>(old >> 59u);
    return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
  }

  std::uint64_t next_u64() {
    std::uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }

  /// Uniform in [0,1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [lo,hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Integer in [0,n), n >= 1. Rejection-free modulo is acceptable here:
  /// n is tiny compared to 2^64 in every call site.
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

  /// Standard normal via Box-Muller (the cosine branch; the sine mate is
  /// discarded to keep one draw == two uniforms, always).
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  /// Gumbel(0,1) sample: -log(-log u), u clamped into (eps, 1-eps),
  /// eps = 1e-12, so the double log never sees 0 or 1.
  double gumbel() {
    double u = uniform();
    if (u < 1e-12) u = 1e-12;
    if (u > 1.0 - 1e-12) u = 1.0 - 1e-12;
    return -std::log(-std::log(u));
  }

  /// Fisher-Yates shuffle with this stream.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  static constexpr std::uint64_t kIncrement = 1442695040888963407ULL;
  std::uint64_t state_ = 0;
};

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace detail

/// Derives an independent seed for a work cell (experiment grid cell,
/// per-trial stream, ...). Mixing is splitmix64 over (base, tag) so cells
/// can run in any order, or in parallel, with identical results.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag) {
  return detail::splitmix64(detail::splitmix64(base) ^ tag * 0x9e3779b97f4a7c15ULL);
}

}  // namespace zsnn
