#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "zsnn/ama/oracle.hpp"
#include "zsnn/harness/config.hpp"
#include "zsnn/metrics/report.hpp"
#include "zsnn/planner/planner.hpp"
#include "zsnn/rng.hpp"
#include "zsnn/sae/sae.hpp"
#include "zsnn/worlds/worlds.hpp"

namespace zsnn {

struct BenchRow {
  std::string variant;
  int n = 0;
  int seed = 0;
  int walk = 0;
  NoiseSpec noise;
  int instance = 0;
  SearchOutcome outcome = SearchOutcome::Unsolvable;
  int cost = 0;
  std::int64_t expansions = 0;
  std::int64_t evaluations = 0;
  double wall_ms = 0.0;
  bool valid = false;
  bool success = false;
};

struct BenchResult {
  std::vector<BenchRow> rows;
  nlohmann::ordered_json summary;
  std::string csv;
};

using SaeCellFn = std::function<SaeModel(const LossVariant&, int n, int seed)>;

namespace detail {

inline const char* outcome_name(SearchOutcome o) {
  switch (o) {
    case SearchOutcome::Plan:
      return "plan";
    case SearchOutcome::Unsolvable:
      return "unsolvable";
    case SearchOutcome::LimitExceeded:
      return "limit";
  }
  return "?";
}

// Lower-middle median, matching the integer-median convention used by the
// stability report.
inline std::int64_t median_i64(std::vector<std::int64_t> v) {
  std::sort(v.begin(), v.end());
  return v[(v.size() - 1) / 2];
}

// Encodes the full ground-truth transition relation through the model.
inline EncodedTransitions bench_oracle_pairs(const SaeModel& m,
                                             const WorldConfig& world,
                                             std::size_t cap) {
  EncodedTransitions enc;
  enc.n_bits = m.latent.N;
  enc.source = world_name(world) + "-enumerated";
  for (const auto& s : enumerate_states(world, cap)) {
    BitVec sb = encode_argmax(m, render(s, world));
    for (const auto& t : successors(s, world))
      enc.pairs.emplace_back(sb, encode_argmax(m, render(t, world)));
  }
  return enc;
}

}  // namespace detail

// Runs the full instance grid: for every (variant,N) x seed cell, build the
// oracle transition graph under that cell's model, then solve
// walk_lengths x noises x instances_per_cell planning instances. Wall times
// are recorded only when cfg.timings is set so that seeded runs stay
// byte-for-byte reproducible.
inline BenchResult run_bench(const ExperimentConfig& cfg,
                             const SaeCellFn& model_for,
                             std::size_t enumeration_cap = std::size_t(1)
                                                           << 20) {
  validate_experiment(cfg);
  if (!model_for) throw ParamError("run_bench: no model source configured");

  BenchResult out;
  const WorldState goal_state = solved_state(cfg.world);
  const Image goal_clean = render(goal_state, cfg.world);

  for (std::size_t vi = 0; vi < cfg.variants.size(); ++vi) {
    const auto& [variant, n] = cfg.variants[vi];
    for (std::size_t si = 0; si < cfg.seeds.size(); ++si) {
      const int seed = cfg.seeds[si];
      SaeModel m = model_for(variant, n, seed);
      validate_sae(m);
      auto oracle = ama1_build(
          detail::bench_oracle_pairs(m, cfg.world, enumeration_cap));
      auto provider = oracle_provider(oracle);
      const std::uint64_t cell_seed =
          derive_seed(cfg.base_seed, vi * 1000003 + si);

      for (std::size_t wi = 0; wi < cfg.walk_lengths.size(); ++wi) {
        const int walk = cfg.walk_lengths[wi];
        for (std::size_t ni = 0; ni < cfg.noises.size(); ++ni) {
          const auto& noise = cfg.noises[ni];
          for (int k = 0; k < cfg.instances_per_cell; ++k) {
            Rng rng(derive_seed(cell_seed, (wi * 1000 + ni) * 1000 + k));
            WorldState init_state = random_walk(goal_state, walk, cfg.world,
                                                rng);
            Image init_img = apply_noise(render(init_state, cfg.world), noise,
                                         rng);
            Image goal_img = apply_noise(goal_clean, noise, rng);

            auto solved = solve_instance(m, provider, init_img, goal_img,
                                         cfg.world, cfg.heuristic, cfg.limits);
            BenchRow row;
            row.variant = variant_name(variant);
            row.n = n;
            row.seed = seed;
            row.walk = walk;
            row.noise = noise;
            row.instance = k;
            row.outcome = solved.search.outcome;
            row.cost = solved.search.outcome == SearchOutcome::Plan
                           ? solved.search.plan.cost
                           : 0;
            row.expansions = solved.search.stats.expansions;
            row.evaluations = solved.search.stats.evaluations;
            row.wall_ms = cfg.timings
                              ? solved.search.stats.wall_time * 1000.0
                              : 0.0;
            row.valid = solved.verdict.ok;
            row.success = solved.success;
            out.rows.push_back(std::move(row));
          }
        }
      }
    }
  }

  // ---- per-instance CSV ---------------------------------------------------
  std::string csv =
      "world,variant,n,seed,walk,noise_kind,noise_param,instance,outcome,"
      "cost,expansions,evaluations,wall_ms,valid\n";
  const std::string world = world_name(cfg.world);
  for (const auto& r : out.rows) {
    csv += world;
    csv += ',';
    csv += r.variant;
    csv += ',';
    csv += std::to_string(r.n);
    csv += ',';
    csv += std::to_string(r.seed);
    csv += ',';
    csv += std::to_string(r.walk);
    csv += ',';
    csv += detail::noise_kind_name(r.noise.kind);
    csv += ',';
    csv += detail::fmt_real(detail::noise_param(r.noise));
    csv += ',';
    csv += std::to_string(r.instance);
    csv += ',';
    csv += detail::outcome_name(r.outcome);
    csv += ',';
    csv += std::to_string(r.cost);
    csv += ',';
    csv += std::to_string(r.expansions);
    csv += ',';
    csv += std::to_string(r.evaluations);
    csv += ',';
    csv += detail::fmt_real(r.wall_ms);
    csv += ',';
    csv += r.valid ? '1' : '0';
    csv += '\n';
  }
  out.csv = std::move(csv);

  // ---- summary JSON -------------------------------------------------------
  nlohmann::ordered_json j;
  j["world"] = world;
  j["heuristic"] = cfg.heuristic == Heuristic::Blind ? "blind" : "goal-count";
  j["seed"] = cfg.base_seed;
  auto cells = nlohmann::ordered_json::array();
  std::size_t idx = 0;
  for (std::size_t vi = 0; vi < cfg.variants.size(); ++vi)
    for (std::size_t si = 0; si < cfg.seeds.size(); ++si)
      for (std::size_t wi = 0; wi < cfg.walk_lengths.size(); ++wi)
        for (std::size_t ni = 0; ni < cfg.noises.size(); ++ni) {
          int solved = 0;
          std::vector<std::int64_t> exp;
          nlohmann::ordered_json cell;
          cell["variant"] = variant_name(cfg.variants[vi].first);
          cell["n"] = cfg.variants[vi].second;
          cell["seed"] = cfg.seeds[si];
          cell["walk"] = cfg.walk_lengths[wi];
          cell["noise"] = noise_name(cfg.noises[ni]);
          for (int k = 0; k < cfg.instances_per_cell; ++k, ++idx) {
            const auto& r = out.rows[idx];
            solved += r.success;
            if (r.success) exp.push_back(r.expansions);
          }
          cell["instances"] = cfg.instances_per_cell;
          cell["solved"] = solved;
          if (exp.empty())
            cell["median_expansions"] = nullptr;
          else
            cell["median_expansions"] = detail::median_i64(exp);
          cells.push_back(std::move(cell));
        }
  j["cells"] = std::move(cells);

  // Expansion comparison between the first plain-SAE and first ZSAE variant,
  // restricted to instances solved under both (per seed/walk/noise/index).
  int sae_vi = -1, zsae_vi = -1;
  for (std::size_t vi = 0; vi < cfg.variants.size(); ++vi) {
    if (cfg.variants[vi].first.kind == LossKind::SAE && sae_vi < 0)
      sae_vi = static_cast<int>(vi);
    if (cfg.variants[vi].first.kind == LossKind::ZSAE && zsae_vi < 0)
      zsae_vi = static_cast<int>(vi);
  }
  if (sae_vi >= 0 && zsae_vi >= 0) {
    const std::size_t per_variant =
        cfg.seeds.size() * cfg.walk_lengths.size() * cfg.noises.size() *
        cfg.instances_per_cell;
    std::vector<std::int64_t> sae_exp, zsae_exp;
    for (std::size_t off = 0; off < per_variant; ++off) {
      const auto& a = out.rows[sae_vi * per_variant + off];
      const auto& b = out.rows[zsae_vi * per_variant + off];
      if (a.success && b.success) {
        sae_exp.push_back(a.expansions);
        zsae_exp.push_back(b.expansions);
      }
    }
    nlohmann::ordered_json cmp;
    cmp["sae_variant"] = variant_name(cfg.variants[sae_vi].first);
    cmp["zsae_variant"] = variant_name(cfg.variants[zsae_vi].first);
    cmp["common_solved"] = sae_exp.size();
    if (sae_exp.empty()) {
      cmp["sae_median_expansions"] = nullptr;
      cmp["zsae_median_expansions"] = nullptr;
    } else {
      cmp["sae_median_expansions"] = detail::median_i64(sae_exp);
      cmp["zsae_median_expansions"] = detail::median_i64(zsae_exp);
    }
    j["comparison"] = std::move(cmp);
  }
  out.summary = std::move(j);
  return out;
}

}  // namespace zsnn
