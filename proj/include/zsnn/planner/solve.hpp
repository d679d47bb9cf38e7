#pragma once

#include <vector>

#include "zsnn/planner/astar.hpp"
#include "zsnn/sae/model.hpp"
#include "zsnn/worlds/classify.hpp"
#include "zsnn/worlds/world.hpp"

namespace zsnn {

struct SolveOutcome {
  SearchResult search;
  std::vector<Image> frames;  // decoded plan states, empty without a plan
  PlanVerdict verdict;        // ground-truth validation of the frames
  bool success = false;       // plan found and the validator accepted it
};

// Full pipeline on one instance: argmax-encode both endpoint images, search
// the latent space, decode the plan back to images, and let the world
// validator judge the strip. Success requires both a plan and an Ok verdict.
template <typename T>
SolveOutcome solve_instance(const Sae<T>& m, const SuccessorFn& provider,
                            const Image& init_img, const Image& goal_img,
                            const WorldConfig& cfg, Heuristic heuristic,
                            const SearchLimits& limits = {}) {
  SolveOutcome out;
  SearchProblem problem;
  problem.init = encode_argmax(m, init_img);
  problem.goal = encode_argmax(m, goal_img);
  problem.successors = provider;
  out.search = astar(problem, heuristic, limits);
  if (out.search.outcome != SearchOutcome::Plan) return out;
  out.frames.reserve(out.search.plan.states.size());
  for (const auto& b : out.search.plan.states)
    out.frames.push_back(decode(m, b));
  out.verdict = validate_plan(out.frames, cfg);
  out.success = out.verdict.ok;
  return out;
}

}  // namespace zsnn
