#include <gtest/gtest.h>

#include <map>
#include <queue>
#include <set>
#include <unordered_map>

#include "support/perfect_sae.hpp"
#include "zsnn/planner/planner.hpp"
#include "zsnn/worlds/worlds.hpp"

using namespace zsnn;
using zsnn_test::bits_state;
using zsnn_test::lights_truth_provider;
using zsnn_test::make_perfect_lights_sae;
using zsnn_test::state_bits;

namespace {

WorldConfig lights3() {
  WorldConfig c;
  c.kind = WorldKind::LightsOut;
  c.n = 3;
  return c;
}

BitVec code(std::initializer_list<int> bits) {
  BitVec b;
  for (int v : bits) b.bits.push_back(static_cast<std::uint8_t>(v));
  return b;
}

// Small explicit graphs keyed by 2-bit states.
SuccessorFn graph_provider(std::map<BitVec, std::vector<BitVec>> adj) {
  return [adj](const BitVec& s) {
    auto it = adj.find(s);
    return it == adj.end() ? std::vector<BitVec>{} : it->second;
  };
}

// Independent BFS shortest distance over a provider graph; -1 if unreachable.
int bfs_distance(const SuccessorFn& next, const BitVec& from, const BitVec& to) {
  std::unordered_map<BitVec, int, BitVecHash> dist{{from, 0}};
  std::queue<BitVec> q;
  q.push(from);
  while (!q.empty()) {
    BitVec cur = q.front();
    q.pop();
    if (cur == to) return dist[cur];
    for (const auto& suc : next(cur))
      if (dist.emplace(suc, dist[cur] + 1).second) q.push(suc);
  }
  return -1;
}

WorldState random_lights_state(Rng& rng) {
  WorldState s;
  for (int i = 0; i < 9; ++i) s.v.push_back(rng.uniform() < 0.5 ? 0 : 1);
  return s;
}

}  // namespace

TEST(GoalCount, HammingDefinition) {
  EXPECT_EQ(goal_count(code({1, 0, 1}), code({1, 0, 1})), 0);
  EXPECT_EQ(goal_count(code({0, 0, 0}), code({1, 0, 1})), 2);
  EXPECT_THROW(goal_count(code({1}), code({1, 0})), ShapeError);
}

TEST(GoalCount, Symmetric) {
  Rng rng(300);
  for (int t = 0; t < 50; ++t) {
    BitVec a, b;
    for (int i = 0; i < 12; ++i) {
      a.bits.push_back(rng.uniform() < 0.5);
      b.bits.push_back(rng.uniform() < 0.5);
    }
    EXPECT_EQ(goal_count(a, b), goal_count(b, a));
  }
}

TEST(Astar, InitEqualsGoal) {
  SearchProblem p;
  p.init = p.goal = code({1, 0});
  p.successors = graph_provider({});
  auto r = astar(p, Heuristic::Blind);
  ASSERT_EQ(r.outcome, SearchOutcome::Plan);
  EXPECT_EQ(r.plan.cost, 0);
  ASSERT_EQ(r.plan.states.size(), 1u);
  EXPECT_EQ(r.plan.states[0], p.init);
  EXPECT_EQ(r.stats.expansions, 1);
}

TEST(Astar, LineGraph) {
  auto A = code({0, 0}), B = code({0, 1}), C = code({1, 1});
  SearchProblem p;
  p.init = A;
  p.goal = C;
  p.successors = graph_provider({{A, {B}}, {B, {A, C}}, {C, {B}}});
  auto r = astar(p, Heuristic::Blind);
  ASSERT_EQ(r.outcome, SearchOutcome::Plan);
  EXPECT_EQ(r.plan.cost, 2);
  EXPECT_EQ(r.plan.states, (std::vector<BitVec>{A, B, C}));
  EXPECT_LE(r.stats.expansions, r.stats.generations + 1);
  EXPECT_GE(r.stats.peak_open_size, 1u);
}

TEST(Astar, DisconnectedComponentIsUnsolvable) {
  auto A = code({0, 0}), B = code({0, 1}), C = code({1, 1});
  SearchProblem p;
  p.init = A;
  p.goal = C;
  p.successors = graph_provider({{A, {B}}, {B, {A}}, {C, {}}});
  auto r = astar(p, Heuristic::Blind);
  EXPECT_EQ(r.outcome, SearchOutcome::Unsolvable);
  EXPECT_EQ(r.stats.expansions, 2);  // exactly the reachable component
}

TEST(Astar, BadProblemRejected) {
  SearchProblem p;
  p.init = code({0});
  p.goal = code({0, 1});
  p.successors = graph_provider({});
  EXPECT_THROW(astar(p, Heuristic::Blind), ShapeError);
  p.goal = code({0});
  p.successors = nullptr;
  EXPECT_THROW(astar(p, Heuristic::Blind), ParamError);
}

TEST(Astar, BlindMatchesBfsOn200RandomInstances) {
  auto cfg = lights3();
  auto provider = lights_truth_provider(cfg);
  Rng rng(301);
  for (int t = 0; t < 200; ++t) {
    SearchProblem p;
    p.init = state_bits(random_lights_state(rng));
    p.goal = state_bits(random_lights_state(rng));
    p.successors = provider;
    auto r = astar(p, Heuristic::Blind);
    int d = bfs_distance(provider, p.init, p.goal);
    ASSERT_GE(d, 0);  // LightsOut 3x3 is fully connected
    ASSERT_EQ(r.outcome, SearchOutcome::Plan);
    EXPECT_EQ(r.plan.cost, d) << "instance " << t;
    EXPECT_LE(r.stats.expansions, r.stats.generations + 1);
  }
}

TEST(Astar, GoalCountPlansAreLegal) {
  auto cfg = lights3();
  auto provider = lights_truth_provider(cfg);
  Rng rng(302);
  for (int t = 0; t < 50; ++t) {
    SearchProblem p;
    p.init = state_bits(random_lights_state(rng));
    p.goal = state_bits(random_lights_state(rng));
    p.successors = provider;
    auto r = astar(p, Heuristic::GoalCount);
    ASSERT_EQ(r.outcome, SearchOutcome::Plan);
    EXPECT_EQ(r.plan.states.front(), p.init);
    EXPECT_EQ(r.plan.states.back(), p.goal);
    EXPECT_EQ(r.plan.cost,
              static_cast<int>(r.plan.states.size()) - 1);
    for (std::size_t i = 0; i + 1 < r.plan.states.size(); ++i)
      EXPECT_TRUE(is_transition(bits_state(r.plan.states[i]),
                                bits_state(r.plan.states[i + 1]), cfg));
  }
}

TEST(Astar, NoStateExpandedTwice) {
  auto cfg = lights3();
  auto truth = lights_truth_provider(cfg);
  auto counts = std::make_shared<std::map<BitVec, int>>();
  SearchProblem p;
  p.init = state_bits(solved_state(cfg));
  WorldState goal;
  goal.v = {1, 1, 1, 1, 1, 1, 1, 1, 1};
  p.goal = state_bits(goal);
  p.successors = [truth, counts](const BitVec& s) {
    ++(*counts)[s];
    return truth(s);
  };
  auto r = astar(p, Heuristic::Blind);
  ASSERT_EQ(r.outcome, SearchOutcome::Plan);
  for (const auto& [state, n] : *counts) EXPECT_EQ(n, 1);
}

TEST(Astar, ExpansionLimit) {
  auto cfg = lights3();
  SearchProblem p;
  p.init = state_bits(solved_state(cfg));
  WorldState goal;
  goal.v = {1, 1, 1, 1, 1, 1, 1, 1, 1};
  p.goal = state_bits(goal);
  p.successors = lights_truth_provider(cfg);
  SearchLimits lim;
  lim.max_expansions = 3;
  auto r = astar(p, Heuristic::Blind, lim);
  EXPECT_EQ(r.outcome, SearchOutcome::LimitExceeded);
  EXPECT_LE(r.stats.expansions, 3);
}

TEST(Astar, TimeLimit) {
  auto cfg = lights3();
  SearchProblem p;
  p.init = state_bits(solved_state(cfg));
  WorldState goal;
  goal.v = {1, 1, 1, 1, 1, 1, 1, 1, 1};
  p.goal = state_bits(goal);
  p.successors = lights_truth_provider(cfg);
  SearchLimits lim;
  lim.max_seconds = 0.0;
  auto r = astar(p, Heuristic::Blind, lim);
  EXPECT_EQ(r.outcome, SearchOutcome::LimitExceeded);
}

TEST(Astar, DeterministicAcrossRuns) {
  auto cfg = lights3();
  SearchProblem p;
  Rng rng(303);
  p.init = state_bits(random_lights_state(rng));
  p.goal = state_bits(random_lights_state(rng));
  p.successors = lights_truth_provider(cfg);
  auto a = astar(p, Heuristic::GoalCount);
  auto b = astar(p, Heuristic::GoalCount);
  EXPECT_EQ(a.outcome, b.outcome);
  EXPECT_EQ(a.plan.states, b.plan.states);
  EXPECT_EQ(a.stats.expansions, b.stats.expansions);
  EXPECT_EQ(a.stats.generations, b.stats.generations);
  EXPECT_EQ(a.stats.evaluations, b.stats.evaluations);
}

TEST(Astar, ProviderSwapWithEqualSetsIsTransparent) {
  auto cfg = lights3();
  auto direct = lights_truth_provider(cfg);
  SuccessorFn copying = [direct](const BitVec& s) {
    auto v = direct(s);
    return std::vector<BitVec>(v.begin(), v.end());
  };
  SearchProblem p;
  Rng rng(304);
  p.init = state_bits(random_lights_state(rng));
  p.goal = state_bits(random_lights_state(rng));
  p.successors = direct;
  auto a = astar(p, Heuristic::Blind);
  p.successors = copying;
  auto b = astar(p, Heuristic::Blind);
  EXPECT_EQ(a.plan.states, b.plan.states);
  EXPECT_EQ(a.stats.expansions, b.stats.expansions);
}

TEST(SolveInstance, NoiselessPerfectModelSucceeds) {
  auto cfg = lights3();
  auto m = make_perfect_lights_sae(3);
  auto provider = lights_truth_provider(cfg);
  Rng rng(305);
  for (int t = 0; t < 5; ++t) {
    auto init = random_lights_state(rng);
    auto goal = random_lights_state(rng);
    auto out = solve_instance(m, provider, render(init, cfg),
                              render(goal, cfg), cfg, Heuristic::Blind);
    ASSERT_EQ(out.search.outcome, SearchOutcome::Plan);
    EXPECT_TRUE(out.success) << out.verdict.reason;
    EXPECT_EQ(out.frames.size(), out.search.plan.states.size());
    ASSERT_FALSE(out.verdict.states.empty());
    EXPECT_EQ(out.verdict.states.front(), init);
    EXPECT_EQ(out.verdict.states.back(), goal);
  }
}

TEST(SolveInstance, SameEndpointsGiveSingleFrame) {
  auto cfg = lights3();
  auto m = make_perfect_lights_sae(3);
  Rng rng(306);
  auto s = random_lights_state(rng);
  auto out = solve_instance(m, lights_truth_provider(cfg), render(s, cfg),
                            render(s, cfg), cfg, Heuristic::Blind);
  EXPECT_TRUE(out.success);
  EXPECT_EQ(out.frames.size(), 1u);
  EXPECT_EQ(out.search.plan.cost, 0);
}

TEST(SolveInstance, SurvivesModerateNoise) {
  auto cfg = lights3();
  auto m = make_perfect_lights_sae(3);
  Rng rng(307);
  auto init = random_lights_state(rng);
  auto goal = random_lights_state(rng);
  auto spec = NoiseSpec::gaussian(0.3);
  Image ni = apply_noise(render(init, cfg), spec, rng);
  Image ng = apply_noise(render(goal, cfg), spec, rng);
  auto out = solve_instance(m, lights_truth_provider(cfg), ni, ng, cfg,
                            Heuristic::Blind);
  EXPECT_TRUE(out.success);
}

TEST(SolveInstance, UnreachableGoalReportsUnsolvable) {
  auto cfg = lights3();
  auto m = make_perfect_lights_sae(3);
  Rng rng(308);
  auto init = random_lights_state(rng);
  auto goal = random_lights_state(rng);
  if (goal.v == init.v) goal.v[0] ^= 1;
  auto truth = lights_truth_provider(cfg);
  BitVec banned = state_bits(goal);
  // Same graph with every edge into the goal removed.
  SuccessorFn cut = [truth, banned](const BitVec& s) {
    std::vector<BitVec> out;
    for (auto& v : truth(s))
      if (v != banned) out.push_back(v);
    return out;
  };
  auto out = solve_instance(m, cut, render(init, cfg), render(goal, cfg), cfg,
                            Heuristic::Blind);
  EXPECT_EQ(out.search.outcome, SearchOutcome::Unsolvable);
  EXPECT_FALSE(out.success);
  EXPECT_TRUE(out.frames.empty());
}
