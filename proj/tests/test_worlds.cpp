#include <gtest/gtest.h>

#include <algorithm>
#include <cstdio>
#include <deque>
#include <set>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "zsnn/worlds/worlds.hpp"

using namespace zsnn;

namespace {

WorldConfig lights3() {
  WorldConfig c;
  c.kind = WorldKind::LightsOut;
  c.n = 3;
  return c;
}

WorldConfig twisted3() {
  WorldConfig c = lights3();
  c.kind = WorldKind::TwistedLightsOut;
  return c;
}

WorldConfig tiles3() {
  WorldConfig c;
  c.kind = WorldKind::TilePuzzle;
  c.rows = 3;
  c.cols = 3;
  return c;
}

// Independent BFS shortest-path oracle.
int bfs_dist(const WorldState& from, const WorldState& to,
             const WorldConfig& cfg, int limit = 64) {
  if (from == to) return 0;
  std::unordered_map<WorldState, int, WorldStateHash> dist;
  std::deque<WorldState> q;
  dist[from] = 0;
  q.push_back(from);
  while (!q.empty()) {
    WorldState cur = q.front();
    q.pop_front();
    int d = dist[cur];
    if (d >= limit) continue;
    for (auto& nxt : successors(cur, cfg)) {
      if (dist.count(nxt)) continue;
      if (nxt == to) return d + 1;
      dist[nxt] = d + 1;
      q.push_back(nxt);
    }
  }
  return -1;
}

std::vector<WorldState> bfs_path(const WorldState& from, const WorldState& to,
                                 const WorldConfig& cfg) {
  std::unordered_map<WorldState, WorldState, WorldStateHash> parent;
  std::deque<WorldState> q;
  parent.emplace(from, from);
  q.push_back(from);
  while (!q.empty()) {
    WorldState cur = q.front();
    q.pop_front();
    if (cur == to) break;
    for (auto& nxt : successors(cur, cfg)) {
      if (parent.count(nxt)) continue;
      parent.emplace(nxt, cur);
      q.push_back(nxt);
    }
  }
  std::vector<WorldState> path;
  WorldState cur = to;
  while (true) {
    path.push_back(cur);
    const WorldState& p = parent.at(cur);
    if (p == cur) break;
    cur = p;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

int tile_inversions(const WorldState& s) {
  std::vector<int> tiles;
  for (int x : s.v)
    if (x != 0) tiles.push_back(x);
  int inv = 0;
  for (size_t i = 0; i < tiles.size(); ++i)
    for (size_t j = i + 1; j < tiles.size(); ++j)
      if (tiles[i] > tiles[j]) ++inv;
  return inv;
}

}  // namespace

TEST(Successors, CenterPressMakesPlus) {
  auto cfg = lights3();
  WorldState off = solved_state(cfg);
  auto next = successors(off, cfg);
  ASSERT_EQ(next.size(), 9u);
  // Button order is row-major; center button is index 4.
  const WorldState& plus = next[4];
  std::vector<int> want = {0, 1, 0, 1, 1, 1, 0, 1, 0};
  EXPECT_EQ(plus.v, want);
}

TEST(Successors, PressTwiceRestores) {
  auto cfg = lights3();
  Rng rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    WorldState s = random_state(cfg, rng);
    int r = static_cast<int>(rng.below(3)), c = static_cast<int>(rng.below(3));
    EXPECT_EQ(press(press(s, r, c, cfg), r, c, cfg), s);
  }
}

TEST(Successors, PressOrderIrrelevant) {
  auto cfg = lights3();
  Rng rng(102);
  for (int trial = 0; trial < 30; ++trial) {
    WorldState s = random_state(cfg, rng);
    int r1 = static_cast<int>(rng.below(3)), c1 = static_cast<int>(rng.below(3));
    int r2 = static_cast<int>(rng.below(3)), c2 = static_cast<int>(rng.below(3));
    auto ab = press(press(s, r1, c1, cfg), r2, c2, cfg);
    auto ba = press(press(s, r2, c2, cfg), r1, c1, cfg);
    EXPECT_EQ(ab, ba);
  }
}

TEST(Successors, CornerBlankHasTwoMoves) {
  auto cfg = tiles3();
  WorldState s = solved_state(cfg);  // blank (0) sits top-left
  EXPECT_EQ(successors(s, cfg).size(), 2u);
}

TEST(Successors, SymmetricBothDomains) {
  Rng rng(103);
  for (auto cfg : {lights3(), tiles3()}) {
    for (int trial = 0; trial < 20; ++trial) {
      WorldState s = random_state(cfg, rng);
      for (const auto& nxt : successors(s, cfg)) {
        auto back = successors(nxt, cfg);
        EXPECT_NE(std::find(back.begin(), back.end(), s), back.end());
      }
    }
  }
}

TEST(Successors, RejectsCorruptState) {
  auto cfg = tiles3();
  WorldState bad;
  bad.v = {0, 1, 2, 3, 4, 5, 6, 7, 7};  // duplicate tile
  EXPECT_THROW(successors(bad, cfg), StateError);
  auto lc = lights3();
  WorldState bad2;
  bad2.v = {0, 1, 2, 0, 0, 0, 0, 0, 0};  // value outside {0,1}
  EXPECT_THROW(successors(bad2, lc), StateError);
}

TEST(Enumerate, LightsOutCounts) {
  auto c3 = lights3();
  EXPECT_EQ(enumerate_states(c3).size(), 512u);
  WorldConfig c4 = c3;
  c4.n = 4;
  EXPECT_EQ(enumerate_states(c4).size(), 65536u);
}

TEST(Enumerate, NoDuplicates) {
  auto states = enumerate_states(lights3());
  std::set<WorldState> uniq(states.begin(), states.end());
  EXPECT_EQ(uniq.size(), states.size());
}

TEST(Enumerate, TilePuzzleReachableComponent) {
  auto cfg = tiles3();
  auto states = enumerate_states(cfg);
  EXPECT_EQ(states.size(), 181440u);  // 9!/2
  std::unordered_set<WorldState, WorldStateHash> uniq(states.begin(),
                                                      states.end());
  EXPECT_EQ(uniq.size(), states.size());
  // Solvability invariant for odd-width boards: inversion parity is even.
  for (const auto& s : states) EXPECT_EQ(tile_inversions(s) % 2, 0);
}

TEST(Enumerate, CapExceeded) {
  WorldConfig big = lights3();
  big.n = 5;  // 2^25 states
  EXPECT_THROW(enumerate_states(big), ResourceError);
}

TEST(Render, AllOffIsUniformlyDark) {
  auto cfg = lights3();
  Image img = render(solved_state(cfg), cfg);
  EXPECT_EQ(img.width, 18);
  EXPECT_EQ(img.height, 18);
  for (float v : img.px) {
    EXPECT_TRUE(v == kBorderLevel || v == kOffLevel);
  }
}

TEST(Render, ValuesStayInUnit) {
  Rng rng(104);
  for (auto cfg : {lights3(), twisted3(), tiles3()}) {
    Image img = render(random_state(cfg, rng), cfg);
    for (float v : img.px) {
      EXPECT_GE(v, 0.0f);
      EXPECT_LE(v, 1.0f);
    }
  }
}

TEST(Render, InjectiveOverLightsOutStates) {
  auto cfg = lights3();
  auto states = enumerate_states(cfg);
  std::set<std::vector<float>> seen;
  for (const auto& s : states) seen.insert(render(s, cfg).px);
  EXPECT_EQ(seen.size(), states.size());
}

TEST(Render, ZeroSwirlMatchesUntwisted) {
  auto cfg = twisted3();
  cfg.swirl_strength = 0.0;
  Rng rng(105);
  WorldState s = random_state(cfg, rng);
  auto plain = lights3();
  EXPECT_EQ(render(s, cfg).px, render(s, plain).px);
}

TEST(Render, SwirlMovesPixels) {
  auto cfg = twisted3();
  Rng rng(106);
  WorldState s = random_state(cfg, rng);
  EXPECT_NE(render(s, cfg).px, render(s, lights3()).px);
}

TEST(Render, BuiltinGlyphCellsDistinct) {
  auto cfg = tiles3();
  auto cells = tile_glyph_cells(cfg);
  ASSERT_EQ(cells.size(), 9u);
  for (size_t a = 0; a < cells.size(); ++a)
    for (size_t b = a + 1; b < cells.size(); ++b)
      EXPECT_NE(cells[a].px, cells[b].px) << a << " vs " << b;
}

TEST(Render, TilesDimensions) {
  auto cfg = tiles3();
  Image img = render(solved_state(cfg), cfg);
  EXPECT_EQ(img.width, 48);
  EXPECT_EQ(img.height, 48);
}

TEST(Noise, NoneIsIdentity) {
  auto cfg = lights3();
  Rng rr(107);
  Image img = render(random_state(cfg, rr), cfg);
  Rng rng(1);
  EXPECT_EQ(apply_noise(img, NoiseSpec::none(), rng).px, img.px);
  Rng rng2(1);
  EXPECT_EQ(apply_noise(img, NoiseSpec::gaussian(0.0), rng2).px, img.px);
}

TEST(Noise, SaltPepperFractionNearP) {
  Image img(64, 64, 0.5f);
  Rng rng(108);
  Image noisy = apply_noise(img, NoiseSpec::salt_pepper(0.12), rng);
  int changed = 0, salt = 0;
  for (size_t i = 0; i < img.px.size(); ++i) {
    if (noisy.px[i] != img.px[i]) {
      ++changed;
      if (noisy.px[i] == 1.0f) ++salt;
    }
  }
  double frac = double(changed) / img.px.size();
  EXPECT_NEAR(frac, 0.12, 0.02);
  // Salt/pepper split is even.
  EXPECT_NEAR(double(salt) / changed, 0.5, 0.1);
}

TEST(Noise, AlwaysClipped) {
  auto cfg = lights3();
  Rng rr(109);
  Image img = render(random_state(cfg, rr), cfg);
  Rng rng(110);
  for (auto spec : {NoiseSpec::gaussian(0.6), NoiseSpec::gaussian(5.0),
                    NoiseSpec::salt_pepper(0.5)}) {
    Image noisy = apply_noise(img, spec, rng);
    for (float v : noisy.px) {
      EXPECT_GE(v, 0.0f);
      EXPECT_LE(v, 1.0f);
    }
  }
}

TEST(Noise, BadParamsThrow) {
  EXPECT_THROW(NoiseSpec::gaussian(-0.1), ParamError);
  EXPECT_THROW(NoiseSpec::salt_pepper(1.5), ParamError);
}

TEST(RandomWalk, ZeroStepsReturnsGoal) {
  auto cfg = tiles3();
  Rng rng(111);
  WorldState goal = solved_state(cfg);
  EXPECT_EQ(random_walk(goal, 0, cfg, rng), goal);
}

TEST(RandomWalk, OneStepIsSuccessor) {
  auto cfg = lights3();
  Rng rng(112);
  WorldState goal = solved_state(cfg);
  WorldState s = random_walk(goal, 1, cfg, rng);
  auto next = successors(goal, cfg);
  EXPECT_NE(std::find(next.begin(), next.end(), s), next.end());
}

TEST(RandomWalk, StaysWithinStepBound) {
  Rng rng(113);
  for (auto cfg : {lights3(), tiles3()}) {
    for (int trial = 0; trial < 10; ++trial) {
      WorldState goal = solved_state(cfg);
      WorldState s = random_walk(goal, 7, cfg, rng);
      int d = bfs_dist(s, goal, cfg, 8);
      ASSERT_GE(d, 0);
      EXPECT_LE(d, 7);
    }
  }
}

TEST(Dataset, PairsAreLegalAndCounted) {
  Rng rng(114);
  for (auto cfg : {lights3(), tiles3()}) {
    auto ds = sample_transitions(cfg, 100, rng);
    EXPECT_EQ(ds.pairs.size(), 100u);
    for (const auto& p : ds.pairs)
      EXPECT_TRUE(is_transition(p.pre_state, p.suc_state, cfg));
  }
}

TEST(Dataset, SeededRunsIdentical) {
  auto cfg = lights3();
  Rng a(115), b(115);
  auto da = sample_transitions(cfg, 20, a);
  auto db = sample_transitions(cfg, 20, b);
  for (size_t i = 0; i < da.pairs.size(); ++i) {
    EXPECT_EQ(da.pairs[i].pre_state, db.pairs[i].pre_state);
    EXPECT_EQ(da.pairs[i].suc_state, db.pairs[i].suc_state);
    EXPECT_EQ(da.pairs[i].pre_image.px, db.pairs[i].pre_image.px);
  }
}

TEST(Classify, RoundTripAllLightsOutStates) {
  auto cfg = lights3();
  for (const auto& s : enumerate_states(cfg)) {
    auto got = classify_image(render(s, cfg), cfg);
    ASSERT_TRUE(got.has_value());
    EXPECT_EQ(*got, s);
  }
}

TEST(Classify, RoundTripAllTwistedStates) {
  auto cfg = twisted3();
  for (const auto& s : enumerate_states(cfg)) {
    auto got = classify_image(render(s, cfg), cfg);
    ASSERT_TRUE(got.has_value());
    EXPECT_EQ(*got, s);
  }
}

TEST(Classify, RoundTripAllTilePuzzleStates) {
  auto cfg = tiles3();
  auto refs = enumerate_states(cfg);
  for (const auto& s : refs) {
    auto got = classify_image(render(s, cfg), cfg);
    ASSERT_TRUE(got.has_value());
    EXPECT_EQ(*got, s);
  }
}

TEST(Classify, SurvivesModerateGaussianNoise) {
  auto cfg = lights3();
  Rng rng(116);
  auto spec = NoiseSpec::gaussian(0.3);
  int ok = 0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    WorldState s = random_state(cfg, rng);
    auto got = classify_image(apply_noise(render(s, cfg), spec, rng), cfg);
    if (got && *got == s) ++ok;
  }
  EXPECT_GE(ok, 990);
}

TEST(Classify, AllGrayFails) {
  auto lc = lights3();
  Image gray(lc.img_w(), lc.img_h(), 0.5f);
  EXPECT_FALSE(classify_image(gray, lc).has_value());
  auto tc = tiles3();
  Image gray2(tc.img_w(), tc.img_h(), 0.5f);
  EXPECT_FALSE(classify_image(gray2, tc).has_value());
}

TEST(Classify, DimensionMismatchThrows) {
  auto cfg = lights3();
  Image wrong(4, 4, 0.0f);
  EXPECT_THROW(classify_image(wrong, cfg), ShapeError);
}

TEST(ValidatePlan, BfsPlanIsOk) {
  auto cfg = lights3();
  Rng rng(117);
  WorldState goal = solved_state(cfg);
  WorldState start = random_walk(goal, 4, cfg, rng);
  auto path = bfs_path(start, goal, cfg);
  std::vector<Image> frames;
  for (const auto& s : path) frames.push_back(render(s, cfg));
  auto verdict = validate_plan(frames, cfg);
  EXPECT_TRUE(verdict.ok) << verdict.reason;
  EXPECT_EQ(verdict.states.size(), path.size());
}

TEST(ValidatePlan, DoublePressJumpRejected) {
  auto cfg = lights3();
  WorldState a = solved_state(cfg);
  WorldState b = press(press(a, 0, 0, cfg), 2, 2, cfg);
  auto verdict = validate_plan({render(a, cfg), render(b, cfg)}, cfg);
  EXPECT_FALSE(verdict.ok);
  EXPECT_EQ(verdict.fail_index, 1);
}

TEST(ValidatePlan, SingleFrameOk) {
  auto cfg = lights3();
  auto verdict = validate_plan({render(solved_state(cfg), cfg)}, cfg);
  EXPECT_TRUE(verdict.ok);
}

TEST(ValidatePlan, UnclassifiableFrameReported) {
  auto cfg = lights3();
  Image gray(cfg.img_w(), cfg.img_h(), 0.5f);
  auto verdict = validate_plan({render(solved_state(cfg), cfg), gray}, cfg);
  EXPECT_FALSE(verdict.ok);
  EXPECT_EQ(verdict.fail_index, 1);
}

TEST(ValidatePlan, EmptyThrows) {
  auto cfg = lights3();
  EXPECT_THROW(validate_plan({}, cfg), ParamError);
}
