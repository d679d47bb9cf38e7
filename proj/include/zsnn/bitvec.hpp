#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "zsnn/errors.hpp"

namespace zsnn {

/// Propositional state: a fixed-length vector of 0/1 values.
struct BitVec {
  std::vector<std::uint8_t> bits;

  BitVec() = default;
  explicit BitVec(std::size_t n, std::uint8_t fill = 0) : bits(n, fill) {}

  std::size_t size() const { return bits.size(); }
  std::uint8_t operator[](std::size_t i) const { return bits[i]; }
  std::uint8_t& operator[](std::size_t i) { return bits[i]; }

  bool operator==(const BitVec& o) const { return bits == o.bits; }
  bool operator!=(const BitVec& o) const { return bits != o.bits; }
  bool operator<(const BitVec& o) const { return bits < o.bits; }

  std::string to_string() const {
    std::string s;
    s.reserve(bits.size());
    for (auto b : bits) s.push_back(b ? '1' : '0');
    return s;
  }

  static BitVec from_string(const std::string& s) {
    BitVec v(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) v[i] = (s[i] == '1') ? 1 : 0;
    return v;
  }
};

/// Hamming distance; the goal-count heuristic over latent states.
inline int hamming(const BitVec& a, const BitVec& b) {
  if (a.size() != b.size())
    throw ShapeError("hamming: bit vectors have different lengths");
  int d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]);
  return d;
}

struct BitVecHash {
  std::size_t operator()(const BitVec& v) const {
    // FNV-1a over the 0/1 bytes.
    std::uint64_t h = 1469598103934665603ULL;
    for (auto b : v.bits) {
      h ^= b;
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace zsnn
