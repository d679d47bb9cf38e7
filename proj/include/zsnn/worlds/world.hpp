#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <string>
#include <unordered_set>
#include <vector>

#include "zsnn/errors.hpp"
#include "zsnn/rng.hpp"

namespace zsnn {

enum class WorldKind { LightsOut, TwistedLightsOut, TilePuzzle };
enum class TileSource { BuiltinGlyphs, ExternalImage, IdxDigits };

inline constexpr double kDefaultSwirl = 1.5707963267948966;  // pi/2

struct WorldConfig {
  WorldKind kind = WorldKind::LightsOut;
  int n = 3;               // LightsOut grid side
  int rows = 3, cols = 3;  // tile grid
  int resolution = 0;      // pixels per cell; 0 picks the per-kind default
  TileSource tile_source = TileSource::BuiltinGlyphs;
  std::string tile_path;            // ExternalImage / IdxDigits source
  double swirl_strength = kDefaultSwirl;  // TwistedLightsOut only
  int scramble_steps = 100;  // random-walk length when sampling tile states
  double tau_margin = 0.1;   // classification confidence margin (relative)

  bool lights() const { return kind != WorldKind::TilePuzzle; }
  int cells() const { return lights() ? n * n : rows * cols; }
  int res() const { return resolution > 0 ? resolution : (lights() ? 6 : 16); }
  int img_w() const { return (lights() ? n : cols) * res(); }
  int img_h() const { return (lights() ? n : rows) * res(); }
};

// LightsOut: cells() values in {0,1}, row-major. Tile puzzle: tile id per
// cell, row-major, 0 is the blank.
struct WorldState {
  std::vector<int> v;

  WorldState() = default;
  explicit WorldState(std::vector<int> cells) : v(std::move(cells)) {}

  bool operator==(const WorldState& o) const { return v == o.v; }
  bool operator!=(const WorldState& o) const { return v != o.v; }
  bool operator<(const WorldState& o) const { return v < o.v; }
};

struct WorldStateHash {
  std::size_t operator()(const WorldState& s) const {
    std::uint64_t h = 1469598103934665603ull;
    for (int x : s.v) {
      h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

inline void validate_state(const WorldState& s, const WorldConfig& cfg) {
  if (static_cast<int>(s.v.size()) != cfg.cells())
    throw StateError("state size does not match world config");
  if (cfg.lights()) {
    for (int x : s.v)
      if (x != 0 && x != 1) throw StateError("lights cell outside {0,1}");
  } else {
    std::vector<char> seen(s.v.size(), 0);
    for (int x : s.v) {
      if (x < 0 || x >= static_cast<int>(s.v.size()) || seen[x])
        throw StateError("tile state is not a permutation");
      seen[x] = 1;
    }
  }
}

inline WorldState solved_state(const WorldConfig& cfg) {
  WorldState s;
  s.v.resize(cfg.cells());
  if (cfg.lights()) {
    // all lights off
  } else {
    for (int i = 0; i < cfg.cells(); ++i) s.v[i] = i;
  }
  return s;
}

// LightsOut button press: toggles the cell and its orthogonal neighbors.
inline WorldState press(const WorldState& s, int r, int c,
                        const WorldConfig& cfg) {
  WorldState out = s;
  const int n = cfg.n;
  auto flip = [&](int rr, int cc) {
    if (rr >= 0 && rr < n && cc >= 0 && cc < n)
      out.v[rr * n + cc] ^= 1;
  };
  flip(r, c);
  flip(r - 1, c);
  flip(r + 1, c);
  flip(r, c - 1);
  flip(r, c + 1);
  return out;
}

inline std::vector<WorldState> successors(const WorldState& s,
                                          const WorldConfig& cfg) {
  validate_state(s, cfg);
  std::vector<WorldState> out;
  if (cfg.lights()) {
    out.reserve(cfg.cells());
    for (int r = 0; r < cfg.n; ++r)
      for (int c = 0; c < cfg.n; ++c) out.push_back(press(s, r, c, cfg));
  } else {
    int blank = 0;
    while (s.v[blank] != 0) ++blank;
    const int br = blank / cfg.cols, bc = blank % cfg.cols;
    const int dr[4] = {-1, 1, 0, 0};
    const int dc[4] = {0, 0, -1, 1};
    for (int k = 0; k < 4; ++k) {
      int r = br + dr[k], c = bc + dc[k];
      if (r < 0 || r >= cfg.rows || c < 0 || c >= cfg.cols) continue;
      WorldState nxt = s;
      std::swap(nxt.v[blank], nxt.v[r * cfg.cols + c]);
      out.push_back(std::move(nxt));
    }
  }
  return out;
}

inline bool is_transition(const WorldState& a, const WorldState& b,
                          const WorldConfig& cfg) {
  for (const auto& s : successors(a, cfg))
    if (s == b) return true;
  return false;
}

// Complete duplicate-free state enumeration. LightsOut spaces are every bit
// pattern; the tile puzzle is the component reachable from the solved board
// (half of all permutations).
inline std::vector<WorldState> enumerate_states(const WorldConfig& cfg,
                                                std::size_t cap = 1u << 20) {
  std::vector<WorldState> out;
  if (cfg.lights()) {
    const int bits = cfg.cells();
    if (bits >= 64 || (std::uint64_t(1) << bits) > cap)
      throw ResourceError("state space exceeds enumeration cap");
    const std::uint64_t total = std::uint64_t(1) << bits;
    out.reserve(total);
    for (std::uint64_t code = 0; code < total; ++code) {
      WorldState s;
      s.v.resize(bits);
      for (int i = 0; i < bits; ++i) s.v[i] = int((code >> i) & 1u);
      out.push_back(std::move(s));
    }
  } else {
    std::unordered_set<WorldState, WorldStateHash> seen;
    std::deque<WorldState> frontier;
    WorldState start = solved_state(cfg);
    seen.insert(start);
    frontier.push_back(start);
    out.push_back(start);
    while (!frontier.empty()) {
      WorldState cur = std::move(frontier.front());
      frontier.pop_front();
      for (auto& nxt : successors(cur, cfg)) {
        if (seen.insert(nxt).second) {
          if (seen.size() > cap)
            throw ResourceError("state space exceeds enumeration cap");
          out.push_back(nxt);
          frontier.push_back(std::move(nxt));
        }
      }
    }
  }
  return out;
}

inline WorldState random_walk(const WorldState& goal, int steps,
                              const WorldConfig& cfg, Rng& rng) {
  if (steps < 0) throw ParamError("random_walk: steps must be >= 0");
  WorldState cur = goal;
  for (int i = 0; i < steps; ++i) {
    auto next = successors(cur, cfg);
    cur = std::move(next[rng.below(static_cast<std::uint64_t>(next.size()))]);
  }
  return cur;
}

// Uniform draw over the state space: LightsOut flips a fair coin per cell;
// the tile puzzle scrambles the solved board with a long random walk (kept
// inside the reachable component by construction).
inline WorldState random_state(const WorldConfig& cfg, Rng& rng) {
  if (cfg.lights()) {
    WorldState s;
    s.v.resize(cfg.cells());
    for (auto& x : s.v) x = static_cast<int>(rng.below(2));
    return s;
  }
  return random_walk(solved_state(cfg), cfg.scramble_steps, cfg, rng);
}

}  // namespace zsnn
