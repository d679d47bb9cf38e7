#pragma once

#include <memory>
#include <set>
#include <vector>

#include "zsnn/ama/aae.hpp"
#include "zsnn/ama/ad.hpp"
#include "zsnn/planner/astar.hpp"

namespace zsnn {

// AMA2 successor function: every action label's candidate image, minus the
// state itself, kept when the discriminator accepts it at threshold theta.
// Candidates appear in ascending action order, first occurrence kept, so
// the result is deterministic for frozen models.
template <typename T>
std::vector<BitVec> successors_learned(const Aae<T>& aae, const Ad<T>& ad,
                                       const BitVec& s, double theta = 0.5) {
  validate_aae(aae);
  validate_ad(ad);
  if (!(theta > 0.0) || !(theta < 1.0))
    throw ParamError("successors_learned: theta must be in (0,1)");
  if (aae.N != ad.n_bits)
    throw ShapeError("successors_learned: AAE and AD widths differ");
  std::vector<BitVec> out;
  std::set<BitVec> seen;
  for (int a = 0; a < aae.A; ++a) {
    BitVec cand = aae_apply(aae, s, a);
    if (cand == s) continue;
    if (!seen.insert(cand).second) continue;
    if (ad_score(ad, s, cand) >= theta) out.push_back(std::move(cand));
  }
  return out;
}

template <typename T>
SuccessorFn learned_provider(const Aae<T>& aae, const Ad<T>& ad,
                             double theta = 0.5) {
  auto a = std::make_shared<Aae<T>>(aae);
  auto d = std::make_shared<Ad<T>>(ad);
  if (!(theta > 0.0) || !(theta < 1.0))
    throw ParamError("learned_provider: theta must be in (0,1)");
  return [a, d, theta](const BitVec& s) {
    return successors_learned(*a, *d, s, theta);
  };
}

}  // namespace zsnn
