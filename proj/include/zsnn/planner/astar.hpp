#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <queue>
#include <unordered_map>
#include <vector>

#include "zsnn/bitvec.hpp"
#include "zsnn/errors.hpp"

namespace zsnn {

using SuccessorFn = std::function<std::vector<BitVec>(const BitVec&)>;

enum class Heuristic { Blind, GoalCount };

struct SearchProblem {
  BitVec init;
  BitVec goal;
  SuccessorFn successors;  // unit edge costs
};

struct SearchLimits {
  std::int64_t max_expansions = 1'000'000;
  double max_seconds = 60.0;
};

enum class SearchOutcome { Plan, Unsolvable, LimitExceeded };

struct SearchStats {
  std::int64_t expansions = 0;
  std::int64_t generations = 0;
  std::int64_t evaluations = 0;
  double wall_time = 0.0;  // seconds
  std::size_t peak_open_size = 0;
};

struct Plan {
  std::vector<BitVec> states;  // init ... goal inclusive
  int cost = 0;                // == states.size() - 1
};

struct SearchResult {
  SearchOutcome outcome = SearchOutcome::Unsolvable;
  Plan plan;  // meaningful only when outcome == Plan
  SearchStats stats;
};

// Hamming distance between equal-length bit vectors.
inline int goal_count(const BitVec& s, const BitVec& g) {
  if (s.size() != g.size())
    throw ShapeError("goal_count: bit vector lengths differ");
  int d = 0;
  for (std::size_t i = 0; i < s.size(); ++i) d += s.bits[i] != g.bits[i];
  return d;
}

// Best-first on f = g + h, closed at expansion, duplicate detection on the
// exact bit pattern. Ties on f prefer larger g, then FIFO, so expansion
// counts are reproducible. With the blind heuristic the returned plan is
// cost-optimal; Unsolvable means the reachable space was exhausted.
inline SearchResult astar(const SearchProblem& problem, Heuristic heuristic,
                          const SearchLimits& limits = {}) {
  if (!problem.successors) throw ParamError("astar: no successor provider");
  if (problem.init.size() != problem.goal.size())
    throw ShapeError("astar: init and goal lengths differ");

  const auto t0 = std::chrono::steady_clock::now();
  SearchResult res;
  auto& stats = res.stats;
  auto elapsed = [&t0] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  };

  struct Node {
    BitVec state;
    int g = 0;
    int h = 0;
    int parent = -1;
    bool closed = false;
  };
  std::vector<Node> nodes;
  std::unordered_map<BitVec, int, BitVecHash> index;

  auto h_of = [&](const BitVec& s) {
    ++stats.evaluations;
    return heuristic == Heuristic::GoalCount ? goal_count(s, problem.goal) : 0;
  };

  struct OpenEntry {
    int f, g;
    std::uint64_t seq;
    int node;
  };
  struct Cmp {
    bool operator()(const OpenEntry& a, const OpenEntry& b) const {
      if (a.f != b.f) return a.f > b.f;
      if (a.g != b.g) return a.g < b.g;  // larger g wins the tie
      return a.seq > b.seq;              // then first-in first-out
    }
  };
  std::priority_queue<OpenEntry, std::vector<OpenEntry>, Cmp> open;
  std::uint64_t seq = 0;

  nodes.push_back({problem.init, 0, h_of(problem.init), -1, false});
  index.emplace(problem.init, 0);
  open.push({nodes[0].h, 0, seq++, 0});
  stats.peak_open_size = 1;

  auto finish = [&](SearchOutcome o) {
    res.outcome = o;
    stats.wall_time = elapsed();
    return res;
  };

  while (!open.empty()) {
    const OpenEntry top = open.top();
    open.pop();
    Node& cur = nodes[top.node];
    if (cur.closed || top.g != cur.g) continue;  // stale entry

    if (elapsed() > limits.max_seconds) return finish(SearchOutcome::LimitExceeded);
    if (stats.expansions >= limits.max_expansions)
      return finish(SearchOutcome::LimitExceeded);

    cur.closed = true;
    ++stats.expansions;
    if (cur.state == problem.goal) {
      for (int at = top.node; at != -1; at = nodes[at].parent)
        res.plan.states.push_back(nodes[at].state);
      std::reverse(res.plan.states.begin(), res.plan.states.end());
      res.plan.cost = static_cast<int>(res.plan.states.size()) - 1;
      return finish(SearchOutcome::Plan);
    }

    const int next_g = cur.g + 1;
    for (auto& suc : problem.successors(cur.state)) {
      ++stats.generations;
      if (suc.size() != problem.init.size())
        throw ShapeError("astar: provider changed the bit length");
      auto it = index.find(suc);
      if (it == index.end()) {
        const int id = static_cast<int>(nodes.size());
        nodes.push_back({std::move(suc), next_g, 0, top.node, false});
        nodes[id].h = h_of(nodes[id].state);
        index.emplace(nodes[id].state, id);
        open.push({next_g + nodes[id].h, next_g, seq++, id});
      } else {
        Node& n = nodes[it->second];
        if (!n.closed && next_g < n.g) {
          n.g = next_g;
          n.parent = top.node;
          open.push({next_g + n.h, next_g, seq++, it->second});
        }
      }
    }
    if (open.size() > stats.peak_open_size) stats.peak_open_size = open.size();
  }
  return finish(SearchOutcome::Unsolvable);
}

}  // namespace zsnn
