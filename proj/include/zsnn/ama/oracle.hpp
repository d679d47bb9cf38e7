#pragma once

#include <algorithm>
#include <memory>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "zsnn/bitvec.hpp"
#include "zsnn/errors.hpp"
#include "zsnn/planner/astar.hpp"
#include "zsnn/sae/model.hpp"
#include "zsnn/worlds/dataset.hpp"

namespace zsnn {

struct EncodedTransitions {
  int n_bits = 0;
  std::vector<std::pair<BitVec, BitVec>> pairs;  // (s, t) as observed
  std::string source;
};

inline void validate_transitions(const EncodedTransitions& enc) {
  if (enc.n_bits < 1) throw ShapeError("EncodedTransitions: n_bits unset");
  for (const auto& [s, t] : enc.pairs)
    if (static_cast<int>(s.size()) != enc.n_bits ||
        static_cast<int>(t.size()) != enc.n_bits)
      throw ShapeError("EncodedTransitions: vector length != n_bits");
}

// Argmax-encode both frames of every dataset pair.
template <typename T>
EncodedTransitions encode_transitions(const Sae<T>& m,
                                      const TransitionDataset& data,
                                      const std::string& source = "") {
  EncodedTransitions enc;
  enc.n_bits = m.latent.N;
  enc.source = source;
  enc.pairs.reserve(data.pairs.size());
  for (const auto& p : data.pairs)
    enc.pairs.emplace_back(encode_argmax(m, p.pre_image),
                           encode_argmax(m, p.suc_image));
  return enc;
}

// The no-learning action model: observed transitions, deduplicated, as a
// directed adjacency. Successor lists are kept sorted so downstream searches
// expand in a reproducible order.
struct OracleModel {
  int n_bits = 0;
  std::unordered_map<BitVec, std::vector<BitVec>, BitVecHash> adjacency;
  std::size_t edge_count = 0;  // distinct (s, t) pairs
};

inline OracleModel ama1_build(const EncodedTransitions& enc) {
  validate_transitions(enc);
  if (enc.pairs.empty()) throw ParamError("ama1_build: no transitions");
  OracleModel m;
  m.n_bits = enc.n_bits;
  std::set<std::pair<BitVec, BitVec>> seen;
  for (const auto& p : enc.pairs)
    if (seen.insert(p).second) m.adjacency[p.first].push_back(p.second);
  for (auto& [s, sucs] : m.adjacency) std::sort(sucs.begin(), sucs.end());
  m.edge_count = seen.size();
  return m;
}

inline SuccessorFn oracle_provider(const OracleModel& oracle) {
  // Copies the adjacency so the provider outlives the model object.
  auto adj = std::make_shared<decltype(oracle.adjacency)>(oracle.adjacency);
  return [adj](const BitVec& s) {
    auto it = adj->find(s);
    return it == adj->end() ? std::vector<BitVec>{} : it->second;
  };
}

}  // namespace zsnn
