// Acceptance gate: one pass/fail line per numbered criterion, exit 0 only
// when every line passes.  Heavyweight cells (200-epoch trainings) are
// cached on disk under acceptance-cache/ (override with ZSNN_ACCEPT_CACHE),
// so the first run is slow and reruns are cheap.
//
// Usage: acceptance [id ...]   e.g. `acceptance 1 3 11` runs a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "support/perfect_sae.hpp"
#include "zsnn/ama/ama.hpp"
#include "zsnn/harness/harness.hpp"
#include "zsnn/metrics/metrics.hpp"
#include "zsnn/nn/gradcheck.hpp"
#include "zsnn/sae/prune.hpp"

using namespace zsnn;

namespace {

// ---- pinned tolerances and thresholds ------------------------------------
constexpr double kIdentityTol = 1e-9;       // KL + entropy vs N log 2
constexpr double kGradRelTol = 1e-4;        // finite-difference agreement
constexpr double kGumbelFreqTol = 0.01;     // empirical argmax frequency
constexpr double kVarRatioZsaeVsSae = 10.0; // noisy variance improvements
constexpr double kVarRatioSaeVsNg = 3.0;
constexpr int kZsaeEffectiveMax = 30;       // of N=72
constexpr double kSaeEffectiveFrac = 0.8;
constexpr double kMseMax = 1e-2;
constexpr double kSensitivitySpread = 10.0;
constexpr double kDecodeDriftTol = 1e-5;    // per pixel, after pruning
constexpr double kAaeBitsMin = 0.95;
constexpr double kAdAccMin = 0.90;
constexpr double kAma2SolveFrac = 0.5;
constexpr int kCellEpochs = 200;
constexpr int kCellN = 72;
const std::vector<int> kSeeds = {1, 2, 3};

std::string cache_dir() {
  const char* env = std::getenv("ZSNN_ACCEPT_CACHE");
  return env && *env ? env : "acceptance-cache";
}

const WorldConfig& world() {
  static WorldConfig cfg = world_from_name("lightsout3");
  return cfg;
}

SaeModel cell(const LossVariant& v, int n, int seed) {
  TrainConfig cfg;
  cfg.epochs = kCellEpochs;
  return ensure_sae_cell(cache_dir(), world(), v, n, cfg, seed);
}

double med3(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

const std::vector<Image>& all_state_images() {
  static std::vector<Image> imgs = [] {
    std::vector<Image> out;
    for (const auto& s : enumerate_states(world(), 1 << 20))
      out.push_back(render(s, world()));
    return out;
  }();
  return imgs;
}

const std::vector<Image>& sample_images() {
  static std::vector<Image> imgs = [] {
    Rng rng(500);
    std::vector<Image> out;
    for (int i = 0; i < 100; ++i)
      out.push_back(render(random_state(world(), rng), world()));
    return out;
  }();
  return imgs;
}

double noisy_variance(const SaeModel& m) {
  Rng rng(501);  // identical noise stream for every model
  return state_variance(m, sample_images(), 100, NoiseSpec::gaussian(0.3),
                        rng);
}

// Planning instances shared by criteria 9 and 10.
struct Instance {
  Image init, goal;
};

const std::vector<Instance>& plan_instances() {
  static std::vector<Instance> set = [] {
    Rng rng(901);
    std::vector<Instance> out;
    const WorldState goal = solved_state(world());
    const Image goal_img = render(goal, world());
    for (int i = 0; i < 20; ++i) {
      Instance in;
      in.init = render(random_walk(goal, 7, world(), rng), world());
      in.goal = goal_img;
      out.push_back(std::move(in));
    }
    return out;
  }();
  return set;
}

int solved_count(const SaeModel& m, const SuccessorFn& provider,
                 const std::vector<Instance>& set,
                 std::vector<std::int64_t>* expansions = nullptr) {
  SearchLimits limits;
  int solved = 0;
  for (const auto& in : set) {
    auto out = solve_instance(m, provider, in.init, in.goal, world(),
                              Heuristic::GoalCount, limits);
    if (out.success) {
      ++solved;
      if (expansions) expansions->push_back(out.search.stats.expansions);
    } else if (expansions) {
      expansions->push_back(-1);
    }
  }
  return solved;
}

// ---- criteria ------------------------------------------------------------

bool c1_loss_identities(std::string& detail) {
  Rng rng(101);
  double worst = 0;
  for (int t = 0; t < 1000; ++t) {
    const int N = 64;
    Tensor<double> q(N, 2), z(N, 2);
    for (int n = 0; n < N; ++n) {
      double p = rng.uniform();
      q(n, 0) = p;
      q(n, 1) = 1 - p;
      double zp = rng.uniform();
      z(n, 0) = zp;
      z(n, 1) = 1 - zp;
    }
    const double dev =
        std::abs(kl_uniform(q) + entropy(q) - N * std::log(2.0));
    worst = std::max(worst, dev);
    if (dev > kIdentityTol) {
      detail = "KL+H deviation " + std::to_string(dev);
      return false;
    }
    const double rec = rng.uniform(0.0, 2.0);
    const double K = kl_uniform(q);
    const double ng = total_loss(LossVariant::ng(), rec, q, z, 0, 1);
    const double sae = total_loss(LossVariant::sae(), rec, q, z, 0, 1);
    if (ng != rec + K || sae != rec - K) {
      detail = "definition not reproduced bit-for-bit";
      return false;
    }
    const double scale = std::max({1.0, std::abs(ng), std::abs(2 * K)});
    if (std::abs(sae - (ng - 2 * K)) >
        4 * std::numeric_limits<double>::epsilon() * scale) {
      detail = "SAE vs NG-2KL disagree beyond rounding";
      return false;
    }
  }
  detail = "1000 draws, max |KL+H - N log2| = " + std::to_string(worst);
  return true;
}

bool c2_gradcheck(std::string& detail) {
  double worst = 0;
  for (auto variant :
       {LossVariant::ng(), LossVariant::sae(), LossVariant::zsae(0.5)}) {
    Rng rng(201);
    LatentConfig lat;
    lat.N = 4;
    auto m = make_sae<double>(4, 4, lat, variant, rng, 16, 0.0);
    Rng data_rng(202);
    Tensor<double> X(3, 16);
    for (auto& v : X.data) v = data_rng.uniform();
    Tensor<double> noise(3, 8);
    for (auto& g : noise.data) g = data_rng.gumbel();
    const double tau = 0.7;
    const double alpha_eff = effective_alpha(variant, 150, 200);
    auto step = sae_training_step(m, X, noise, tau, alpha_eff, nullptr);
    auto params = param_arrays(m.encoder);
    auto dec_p = param_arrays(m.decoder);
    params.insert(params.end(), dec_p.begin(), dec_p.end());
    auto grads = grad_arrays(step.enc_grads);
    auto dec_g = grad_arrays(step.dec_grads);
    grads.insert(grads.end(), dec_g.begin(), dec_g.end());
    auto loss_fn = [&] {
      return sae_training_step(m, X, noise, tau, alpha_eff, nullptr).total;
    };
    auto res = gradcheck_central(params, grads, loss_fn, 1e-5);
    worst = std::max(worst, res.max_rel_error);
    if (res.max_rel_error >= kGradRelTol || res.checked < 100) {
      detail = std::string(loss_name(variant.kind)) +
               " max rel err = " + std::to_string(res.max_rel_error);
      return false;
    }
  }
  detail = "3 variants, max rel err = " + std::to_string(worst);
  return true;
}

bool c3_gumbel_max(std::string& detail) {
  Rng rng(301);
  const double l0 = std::log(0.25), l1 = std::log(0.75);
  const int draws = 100000;
  int hits1 = 0;
  for (int t = 0; t < draws; ++t) {
    const double a = l0 + rng.gumbel();
    const double b = l1 + rng.gumbel();
    if (b > a) ++hits1;
  }
  const double f1 = static_cast<double>(hits1) / draws;
  const double f0 = 1.0 - f1;
  detail = "freq = (" + std::to_string(f0) + ", " + std::to_string(f1) + ")";
  return std::abs(f0 - 0.25) <= kGumbelFreqTol &&
         std::abs(f1 - 0.75) <= kGumbelFreqTol;
}

bool c4_argmax_determinism(std::string& detail) {
  const Image& img = all_state_images().front();
  for (auto v :
       {LossVariant::ng(), LossVariant::sae(), LossVariant::zsae(0.7)}) {
    SaeModel m = cell(v, kCellN, kSeeds[0]);
    Rng rng(401);
    const double var = state_variance(m, {img}, 100, NoiseSpec::none(), rng);
    if (var != 0.0) {
      detail = std::string(loss_name(v.kind)) +
               " noiseless variance = " + std::to_string(var);
      return false;
    }
  }
  detail = "noiseless argmax variance exactly 0 for ng, sae, zsae";
  return true;
}

bool c5_table1(std::string& detail) {
  std::map<std::string, std::vector<double>> var, mse, eff;
  for (auto v :
       {LossVariant::ng(), LossVariant::sae(), LossVariant::zsae(0.7)}) {
    for (int s : kSeeds) {
      SaeModel m = cell(v, kCellN, s);
      const std::string k = loss_name(v.kind);
      var[k].push_back(noisy_variance(m));
      eff[k].push_back(effective_bits(m, all_state_images()));
      mse[k].push_back(reconstruction_mse(m, all_state_images()));
    }
  }
  const double v_ng = med3(var["ng"]), v_sae = med3(var["sae"]),
               v_zsae = med3(var["zsae"]);
  const double e_sae = med3(eff["sae"]), e_zsae = med3(eff["zsae"]);
  const double m_sae = med3(mse["sae"]), m_zsae = med3(mse["zsae"]);
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "var ng=%.4g sae=%.4g zsae=%.4g | eff sae=%g zsae=%g | "
                "mse sae=%.4g zsae=%.4g",
                v_ng, v_sae, v_zsae, e_sae, e_zsae, m_sae, m_zsae);
  detail = buf;
  bool ok = true;
  ok &= v_zsae * kVarRatioZsaeVsSae <= v_sae;
  ok &= v_sae * kVarRatioSaeVsNg <= v_ng;
  ok &= e_zsae <= kZsaeEffectiveMax;
  ok &= e_sae >= kSaeEffectiveFrac * kCellN;
  ok &= m_sae < kMseMax && m_zsae < kMseMax;
  return ok;
}

bool c6_sensitivity(std::string& detail) {
  std::vector<double> zsae_cells;
  for (double alpha : {0.2, 0.5, 0.7}) {
    std::vector<double> per_seed;
    for (int s : kSeeds)
      per_seed.push_back(noisy_variance(cell(LossVariant::zsae(alpha),
                                             kCellN, s)));
    zsae_cells.push_back(med3(per_seed));
  }
  std::vector<double> sae_cells;
  for (int n : {24, kCellN}) {
    std::vector<double> per_seed;
    for (int s : kSeeds)
      per_seed.push_back(noisy_variance(cell(LossVariant::sae(), n, s)));
    sae_cells.push_back(med3(per_seed));
  }
  const double z_min = *std::min_element(zsae_cells.begin(), zsae_cells.end());
  const double z_max = *std::max_element(zsae_cells.begin(), zsae_cells.end());
  const double s_min = *std::min_element(sae_cells.begin(), sae_cells.end());
  const double s_max = *std::max_element(sae_cells.begin(), sae_cells.end());
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "zsae var(0.2,0.5,0.7)=(%.4g,%.4g,%.4g) | sae var(24,72)="
                "(%.4g,%.4g)",
                zsae_cells[0], zsae_cells[1], zsae_cells[2], sae_cells[0],
                sae_cells[1]);
  detail = buf;
  const bool alpha_flat = z_max <= kSensitivitySpread * z_min;
  const bool n_spread = s_max >= kSensitivitySpread * s_min && s_max > 0;
  return alpha_flat && n_spread;
}

bool c7_pruning(std::string& detail) {
  SaeModel m = cell(LossVariant::zsae(0.7), kCellN, kSeeds[0]);
  const auto& images = all_state_images();
  auto dead = find_constant_bits(m, images);
  auto [pruned, rep] = prune(m, dead);
  std::vector<int> kept;
  {
    std::set<int> ds(dead.begin(), dead.end());
    for (int n = 0; n < m.latent.N; ++n)
      if (!ds.count(n)) kept.push_back(n);
  }
  double worst_drift = 0;
  for (const auto& img : images) {
    BitVec full = encode_argmax(m, img);
    BitVec small;
    for (int k : kept) small.bits.push_back(full.bits[k]);
    BitVec small2 = encode_argmax(pruned, img);
    if (!(small2 == small)) {
      detail = "kept-bit encoder outputs changed";
      return false;
    }
    Image a = decode(m, full), b = decode(pruned, small);
    for (std::size_t i = 0; i < a.px.size(); ++i)
      worst_drift = std::max(
          worst_drift, std::abs(static_cast<double>(a.px[i]) - b.px[i]));
  }
  const long D = static_cast<long>(dead.size());
  const long l_enc = m.encoder.layers.back().in;
  const long l_dec = m.decoder.layers.front().out;
  const bool closed_form = rep.floats_removed_prev == 2 * D * (l_enc + 1) &&
                           rep.floats_removed_next == 2 * D * l_dec &&
                           rep.total_before - rep.total_after ==
                               rep.floats_removed_prev +
                                   rep.floats_removed_next;

  // Reference accounting at published scale: width 1000, 932 of 1000 dead.
  bool worked_example = false;
  {
    Rng rng(701);
    LatentConfig lat;
    lat.N = 1000;
    auto big =
        make_sae<float>(2, 2, lat, LossVariant::zsae(0.7), rng, 1000, 0.0f);
    std::vector<int> bigdead;
    for (int n = 68; n < 1000; ++n) bigdead.push_back(n);
    auto [_, bigrep] = prune(big, bigdead);
    worked_example = bigrep.floats_removed_prev == 1865864 &&
                     bigrep.floats_removed_next == 1864000;
  }
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "dropped %ld of %d bits, drift %.3g, removed %lld+%lld "
                "(closed form %s, 1865864/1864000 %s)",
                D, m.latent.N, worst_drift,
                static_cast<long long>(rep.floats_removed_prev),
                static_cast<long long>(rep.floats_removed_next),
                closed_form ? "ok" : "MISMATCH",
                worked_example ? "ok" : "MISMATCH");
  detail = buf;
  return worst_drift <= kDecodeDriftTol && closed_form && worked_example &&
         D > 0;
}

bool c8_blind_astar_vs_bfs(std::string& detail) {
  SaeModel perfect = zsnn_test::make_perfect_lights_sae(3);
  auto provider = oracle_provider(ama1_build(
      detail::bench_oracle_pairs(perfect, world(), std::size_t(1) << 20)));
  Rng rng(801);
  SearchLimits limits;
  const WorldState goal = solved_state(world());
  const Image goal_img = render(goal, world());
  int agree = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    const WorldState init = random_state(world(), rng);
    // Reference breadth-first distance over the raw world graph.
    std::map<WorldState, int> dist{{init, 0}};
    std::vector<WorldState> frontier{init};
    int bfs_cost = -1;
    if (init == goal) bfs_cost = 0;
    while (bfs_cost < 0 && !frontier.empty()) {
      std::vector<WorldState> next;
      for (const auto& s : frontier) {
        for (const auto& suc : successors(s, world())) {
          if (dist.count(suc)) continue;
          dist[suc] = dist[s] + 1;
          if (suc == goal) {
            bfs_cost = dist[suc];
            break;
          }
          next.push_back(suc);
        }
        if (bfs_cost >= 0) break;
      }
      frontier = std::move(next);
    }
    auto out = solve_instance(perfect, provider, render(init, world()),
                              goal_img, world(), Heuristic::Blind, limits);
    const bool solved = out.search.outcome == SearchOutcome::Plan;
    if (bfs_cost < 0) {
      if (!solved) ++agree;
    } else if (solved && out.search.plan.cost == bfs_cost && out.success) {
      ++agree;
    }
  }
  detail = std::to_string(agree) + "/" + std::to_string(trials) +
           " optimal costs agree";
  return agree == trials;
}

bool c9_ama1_planning(std::string& detail) {
  SaeModel zs1 = cell(LossVariant::zsae(0.7), kCellN, kSeeds[0]);
  auto zs1_provider = oracle_provider(ama1_build(
      detail::bench_oracle_pairs(zs1, world(), std::size_t(1) << 20)));
  const int noiseless = solved_count(zs1, zs1_provider, plan_instances());

  // Noisy comparison, identical corrupted images for both variants.
  std::vector<Instance> noisy;
  {
    Rng nrng(902);
    for (const auto& in : plan_instances()) {
      Instance c;
      c.init = apply_noise(in.init, NoiseSpec::gaussian(0.3), nrng);
      c.goal = apply_noise(in.goal, NoiseSpec::gaussian(0.3), nrng);
      noisy.push_back(std::move(c));
    }
  }
  std::vector<double> z_succ, s_succ;
  for (int s : kSeeds) {
    SaeModel mz = cell(LossVariant::zsae(0.7), kCellN, s);
    auto pz = oracle_provider(ama1_build(
        detail::bench_oracle_pairs(mz, world(), std::size_t(1) << 20)));
    z_succ.push_back(solved_count(mz, pz, noisy));
    SaeModel ms = cell(LossVariant::sae(), kCellN, s);
    auto ps = oracle_provider(ama1_build(
        detail::bench_oracle_pairs(ms, world(), std::size_t(1) << 20)));
    s_succ.push_back(solved_count(ms, ps, noisy));
  }
  const double mz = med3(z_succ), ms = med3(s_succ);
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "noiseless %d/20, noisy medians zsae=%g sae=%g", noiseless,
                mz, ms);
  detail = buf;
  return noiseless == 20 && mz >= ms;
}

struct Ama2Cell {
  double aae_acc = 0, ad_acc = 0;
  int solved = 0;
  std::vector<std::int64_t> expansions;  // -1 where unsolved
};

Ama2Cell ama2_for(const SaeModel& m, std::uint64_t tag) {
  Ama2Cell out;
  auto enc = detail::bench_oracle_pairs(m, world(), std::size_t(1) << 20);
  TrainConfig cfg;
  cfg.epochs = 500;
  Rng rng(derive_seed(1000, tag));
  AaeModel aae = aae_train(enc, 16, cfg, rng);
  out.aae_acc = aae_roundtrip_accuracy(aae, enc);

  std::vector<BitVec> pool;
  {
    std::set<BitVec> uniq;
    for (const auto& [s, t] : enc.pairs) {
      uniq.insert(s);
      uniq.insert(t);
    }
    pool.assign(uniq.begin(), uniq.end());
  }
  Rng nrng(derive_seed(1001, tag));
  auto negatives = negative_sampling(enc, pool, nrng, 1);
  TrainConfig ad_cfg;
  ad_cfg.epochs = 50;
  Rng adrng(derive_seed(1002, tag));
  AdModel ad = ad_train(enc.pairs, negatives, ad_cfg, adrng);
  out.ad_acc = ad_accuracy(ad, enc.pairs, negatives);

  auto provider = learned_provider(std::move(aae), std::move(ad), 0.5);
  out.solved = solved_count(m, provider, plan_instances(), &out.expansions);
  return out;
}

bool c10_ama2(std::string& detail) {
  Ama2Cell z = ama2_for(cell(LossVariant::zsae(0.7), kCellN, kSeeds[0]), 7);
  Ama2Cell s = ama2_for(cell(LossVariant::sae(), kCellN, kSeeds[0]), 8);
  std::vector<std::int64_t> ze, se;
  for (std::size_t i = 0; i < z.expansions.size(); ++i) {
    if (z.expansions[i] >= 0 && s.expansions[i] >= 0) {
      ze.push_back(z.expansions[i]);
      se.push_back(s.expansions[i]);
    }
  }
  const std::int64_t mz = ze.empty() ? -1 : detail::median_i64(ze);
  const std::int64_t ms = se.empty() ? -1 : detail::median_i64(se);
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "zsae: aae %.3f ad %.3f solved %d/20 | sae: aae %.3f ad %.3f "
                "solved %d/20 | common %zu median exp zsae=%lld sae=%lld",
                z.aae_acc, z.ad_acc, z.solved, s.aae_acc, s.ad_acc, s.solved,
                ze.size(), static_cast<long long>(mz),
                static_cast<long long>(ms));
  detail = buf;
  bool ok = z.aae_acc >= kAaeBitsMin && z.ad_acc >= kAdAccMin &&
            z.solved >= static_cast<int>(kAma2SolveFrac * 20);
  if (!ze.empty()) ok = ok && mz <= ms;
  return ok;
}

bool c11_roundtrips(std::string& detail) {
  namespace fs = std::filesystem;
  auto dir = fs::temp_directory_path() / "zsnn-acceptance";
  fs::create_directories(dir);

  Rng irng(1101);
  Image img(9, 7);
  for (auto& v : img.px) v = static_cast<float>(irng.below(256)) / 255.0f;
  const auto pgm = (dir / "rt.pgm").string();
  write_pgm(pgm, img);
  Image back = read_pgm(pgm);
  if (back.px != img.px) {
    detail = "PGM round trip drifted";
    return false;
  }

  SaeModel m = zsnn_test::make_perfect_lights_sae(3);
  const auto p1 = (dir / "m1.zsnn").string();
  const auto p2 = (dir / "m2.zsnn").string();
  save_model(m, p1);
  SaeModel loaded = load_sae(p1);
  save_model(loaded, p2);
  std::ifstream f1(p1, std::ios::binary), f2(p2, std::ios::binary);
  std::string b1{std::istreambuf_iterator<char>(f1), {}};
  std::string b2{std::istreambuf_iterator<char>(f2), {}};
  if (b1 != b2 || b1.empty()) {
    detail = "model save-load-save not byte-identical";
    return false;
  }

  auto bytes = model_bytes(m);
  Rng rng(1102);
  int caught = 0;
  for (int t = 0; t < 100; ++t) {
    auto mut = bytes;
    const std::size_t pos = rng.below(mut.size());
    mut[pos] ^= static_cast<std::uint8_t>(1 + rng.below(255));
    try {
      (void)load_model_bytes(mut);
    } catch (const IntegrityError&) {
      ++caught;
    }
  }
  detail = "PGM exact, model file byte-stable, CRC caught " +
           std::to_string(caught) + "/100 corruptions";
  return caught == 100;
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    int id;
    const char* name;
    std::function<bool(std::string&)> run;
  };
  const std::vector<Criterion> all = {
      {1, "loss identities", c1_loss_identities},
      {2, "gradient check", c2_gradcheck},
      {3, "gumbel-max frequencies", c3_gumbel_max},
      {4, "argmax determinism", c4_argmax_determinism},
      {5, "stability table", c5_table1},
      {6, "sensitivity grid", c6_sensitivity},
      {7, "dead-bit pruning", c7_pruning},
      {8, "blind A* vs BFS", c8_blind_astar_vs_bfs},
      {9, "oracle-graph planning", c9_ama1_planning},
      {10, "learned action model", c10_ama2},
      {11, "serialization round trips", c11_roundtrips},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

  std::printf("model cache: %s\n", cache_dir().c_str());
  int failures = 0;
  for (const auto& c : all) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    std::printf("%s %2d %-28s (%.1fs) %s\n", ok ? "PASS" : "FAIL", c.id,
                c.name, secs, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
