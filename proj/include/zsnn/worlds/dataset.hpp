#pragma once

#include <vector>

#include "zsnn/errors.hpp"
#include "zsnn/image.hpp"
#include "zsnn/rng.hpp"
#include "zsnn/worlds/render.hpp"
#include "zsnn/worlds/world.hpp"

namespace zsnn {

struct TransitionPair {
  Image pre_image, suc_image;
  WorldState pre_state, suc_state;
};

struct TransitionDataset {
  WorldConfig config;
  std::vector<TransitionPair> pairs;
};

// Random environment snapshots: pre drawn uniformly over the state space,
// suc uniformly over its successors, both rendered.
inline TransitionDataset sample_transitions(const WorldConfig& cfg, int count,
                                            Rng& rng) {
  if (count < 1) throw ParamError("sample_transitions: count must be >= 1");
  TransitionDataset ds;
  ds.config = cfg;
  ds.pairs.reserve(count);
  for (int i = 0; i < count; ++i) {
    TransitionPair p;
    p.pre_state = random_state(cfg, rng);
    auto next = successors(p.pre_state, cfg);
    p.suc_state = next[rng.below(static_cast<std::uint64_t>(next.size()))];
    p.pre_image = render(p.pre_state, cfg);
    p.suc_image = render(p.suc_state, cfg);
    ds.pairs.push_back(std::move(p));
  }
  return ds;
}

}  // namespace zsnn
