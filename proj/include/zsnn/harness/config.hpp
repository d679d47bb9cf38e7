#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "zsnn/errors.hpp"
#include "zsnn/metrics/report.hpp"
#include "zsnn/planner/astar.hpp"
#include "zsnn/sae/loss.hpp"
#include "zsnn/sae/train.hpp"
#include "zsnn/worlds/noise.hpp"
#include "zsnn/worlds/world.hpp"

namespace zsnn {

// --------------------------------------------------------------------------
// Flag-value grammars shared by the CLI and config files. All throw
// ParamError on malformed input; the CLI maps that to a usage error.

inline std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline double parse_real(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw ParamError("");
    return v;
  } catch (...) {
    throw ParamError(std::string(what) + ": not a number: '" + s + "'");
  }
}

inline int parse_int(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw ParamError("");
    return v;
  } catch (...) {
    throw ParamError(std::string(what) + ": not an integer: '" + s + "'");
  }
}

// World names: lightsout3, lightsout4, twisted3, twisted4, tile3x3 / tile3.
inline WorldConfig world_from_name(const std::string& name) {
  WorldConfig cfg;
  auto tail_int = [&](std::size_t prefix_len, const char* what) {
    return parse_int(name.substr(prefix_len), what);
  };
  if (name.rfind("lightsout", 0) == 0) {
    cfg.kind = WorldKind::LightsOut;
    cfg.n = tail_int(9, "world size");
  } else if (name.rfind("twisted", 0) == 0) {
    cfg.kind = WorldKind::TwistedLightsOut;
    cfg.n = tail_int(7, "world size");
  } else if (name.rfind("tile", 0) == 0) {
    cfg.kind = WorldKind::TilePuzzle;
    auto dims = split_list(name.substr(4), 'x');
    if (dims.size() == 1) {
      cfg.rows = cfg.cols = parse_int(dims[0], "tile size");
    } else if (dims.size() == 2) {
      cfg.rows = parse_int(dims[0], "tile rows");
      cfg.cols = parse_int(dims[1], "tile cols");
    } else {
      throw ParamError("world: bad tile geometry in '" + name + "'");
    }
  } else {
    throw ParamError("world: unknown name '" + name +
                     "' (expected lightsoutN, twistedN, or tileRxC)");
  }
  if (cfg.lights() ? cfg.n < 2 : (cfg.rows < 2 || cfg.cols < 2))
    throw ParamError("world: size too small in '" + name + "'");
  return cfg;
}

inline std::string world_name(const WorldConfig& cfg) {
  switch (cfg.kind) {
    case WorldKind::LightsOut:
      return "lightsout" + std::to_string(cfg.n);
    case WorldKind::TwistedLightsOut:
      return "twisted" + std::to_string(cfg.n);
    case WorldKind::TilePuzzle:
      return "tile" + std::to_string(cfg.rows) + "x" + std::to_string(cfg.cols);
  }
  return "?";
}

// Variant names: ng | sae | zsae:<alpha>[:<warmup_fraction>]
inline LossVariant variant_from_name(const std::string& name) {
  auto parts = split_list(name, ':');
  if (parts[0] == "ng" && parts.size() == 1) return LossVariant::ng();
  if (parts[0] == "sae" && parts.size() == 1) return LossVariant::sae();
  if (parts[0] == "zsae" && (parts.size() == 2 || parts.size() == 3)) {
    double alpha = parse_real(parts[1], "zsae alpha");
    double warm = parts.size() == 3 ? parse_real(parts[2], "zsae warmup")
                                    : 1.0 / 3.0;
    return LossVariant::zsae(alpha, warm);
  }
  throw ParamError("variant: expected ng, sae, or zsae:<alpha>, got '" + name +
                   "'");
}

inline std::string variant_name(const LossVariant& v) {
  if (v.kind != LossKind::ZSAE) return loss_name(v.kind);
  char buf[48];
  std::snprintf(buf, sizeof buf, "zsae:%g", v.alpha);
  return buf;
}

// Noise names: none | gaussian:<sigma> | salt_pepper:<p>
inline NoiseSpec noise_from_name(const std::string& name) {
  auto parts = split_list(name, ':');
  if (parts[0] == "none" && parts.size() == 1) return NoiseSpec::none();
  if (parts[0] == "gaussian" && parts.size() == 2)
    return NoiseSpec::gaussian(parse_real(parts[1], "gaussian sigma"));
  if ((parts[0] == "salt_pepper" || parts[0] == "saltpepper") &&
      parts.size() == 2)
    return NoiseSpec::salt_pepper(parse_real(parts[1], "salt_pepper p"));
  throw ParamError(
      "noise: expected none, gaussian:<sigma>, or salt_pepper:<p>, got '" +
      name + "'");
}

inline std::string noise_name(const NoiseSpec& s) {
  if (s.kind == NoiseKind::None) return "none";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s:%g", detail::noise_kind_name(s.kind),
                detail::noise_param(s));
  return buf;
}

inline Heuristic heuristic_from_name(const std::string& name) {
  if (name == "blind") return Heuristic::Blind;
  if (name == "goal-count") return Heuristic::GoalCount;
  throw ParamError("heuristic: expected blind or goal-count, got '" + name +
                   "'");
}

// --------------------------------------------------------------------------

// One SAE training/evaluation cell is (variant, N); the benchmark crosses
// those with seeds, walk lengths, and noise specs.
struct ExperimentConfig {
  WorldConfig world;
  std::vector<std::pair<LossVariant, int>> variants;  // (loss, N)
  std::vector<int> seeds;
  std::vector<NoiseSpec> noises;
  TrainConfig train;
  std::vector<int> walk_lengths = {7, 14};
  int instances_per_cell = 10;
  SearchLimits limits;
  Heuristic heuristic = Heuristic::GoalCount;
  std::uint64_t base_seed = 0;
  bool timings = false;  // real wall times in reports (breaks byte-stability)
};

inline void validate_experiment(const ExperimentConfig& cfg) {
  if (cfg.variants.empty()) throw ParamError("experiment: variant grid empty");
  if (cfg.seeds.empty()) throw ParamError("experiment: seed list empty");
  if (cfg.noises.empty()) throw ParamError("experiment: noise grid empty");
  if (cfg.walk_lengths.empty())
    throw ParamError("experiment: walk length list empty");
  for (int w : cfg.walk_lengths)
    if (w < 1) throw ParamError("experiment: walk lengths must be >= 1");
  if (cfg.instances_per_cell < 1)
    throw ParamError("experiment: instances_per_cell must be >= 1");
  std::set<int> uniq(cfg.seeds.begin(), cfg.seeds.end());
  if (uniq.size() != cfg.seeds.size())
    throw ParamError("experiment: seeds must be distinct");
  for (const auto& [v, n] : cfg.variants)
    if (n < 1) throw ParamError("experiment: latent width must be >= 1");
}

inline nlohmann::ordered_json experiment_to_json(const ExperimentConfig& cfg) {
  nlohmann::ordered_json j;
  j["world"] = world_name(cfg.world);
  auto vs = nlohmann::ordered_json::array();
  for (const auto& [v, n] : cfg.variants)
    vs.push_back({{"variant", variant_name(v)}, {"n", n}});
  j["variants"] = vs;
  j["seeds"] = cfg.seeds;
  auto ns = nlohmann::ordered_json::array();
  for (const auto& s : cfg.noises) ns.push_back(noise_name(s));
  j["noises"] = ns;
  j["train"] = {{"epochs", cfg.train.epochs},
                {"batch_size", cfg.train.batch_size},
                {"lr", cfg.train.lr}};
  j["walk_lengths"] = cfg.walk_lengths;
  j["instances_per_cell"] = cfg.instances_per_cell;
  j["limits"] = {{"max_expansions", cfg.limits.max_expansions},
                 {"max_seconds", cfg.limits.max_seconds}};
  j["heuristic"] =
      cfg.heuristic == Heuristic::Blind ? "blind" : "goal-count";
  j["seed"] = cfg.base_seed;
  j["timings"] = cfg.timings;
  return j;
}

inline ExperimentConfig experiment_from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  try {
    cfg.world = world_from_name(j.at("world").get<std::string>());
    for (const auto& v : j.at("variants"))
      cfg.variants.emplace_back(
          variant_from_name(v.at("variant").get<std::string>()),
          v.at("n").get<int>());
    cfg.seeds = j.at("seeds").get<std::vector<int>>();
    for (const auto& s : j.at("noises"))
      cfg.noises.push_back(noise_from_name(s.get<std::string>()));
    if (j.contains("train")) {
      const auto& t = j.at("train");
      if (t.contains("epochs")) cfg.train.epochs = t.at("epochs").get<int>();
      if (t.contains("batch_size"))
        cfg.train.batch_size = t.at("batch_size").get<int>();
      if (t.contains("lr")) cfg.train.lr = t.at("lr").get<double>();
    }
    if (j.contains("walk_lengths"))
      cfg.walk_lengths = j.at("walk_lengths").get<std::vector<int>>();
    if (j.contains("instances_per_cell"))
      cfg.instances_per_cell = j.at("instances_per_cell").get<int>();
    if (j.contains("limits")) {
      const auto& l = j.at("limits");
      if (l.contains("max_expansions"))
        cfg.limits.max_expansions = l.at("max_expansions").get<std::int64_t>();
      if (l.contains("max_seconds"))
        cfg.limits.max_seconds = l.at("max_seconds").get<double>();
    }
    if (j.contains("heuristic"))
      cfg.heuristic = heuristic_from_name(j.at("heuristic").get<std::string>());
    if (j.contains("seed")) cfg.base_seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("timings")) cfg.timings = j.at("timings").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw ParamError(std::string("experiment config: ") + e.what());
  }
  validate_experiment(cfg);
  return cfg;
}

}  // namespace zsnn
