#pragma once

#include "CLI11.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "zsnn/ama/ama.hpp"
#include "zsnn/harness/bench.hpp"
#include "zsnn/harness/config.hpp"
#include "zsnn/harness/models.hpp"
#include "zsnn/harness/strip.hpp"
#include "zsnn/io/idx.hpp"
#include "zsnn/io/model_file.hpp"
#include "zsnn/io/pgm.hpp"
#include "zsnn/metrics/metrics.hpp"
#include "zsnn/sae/prune.hpp"

namespace zsnn {

namespace cli_detail {

// Malformed flag values (world/variant/noise grammars) are usage errors,
// distinct from runtime failures: they exit 2 like any unknown flag.
struct UsageFailure {
  std::string msg;
};

template <typename Fn>
auto usage(Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ParamError& e) {
    throw UsageFailure{e.what()};
  }
}

inline std::string default_out_dir() {
  const char* env = std::getenv("ZSNN_OUT");
  return env && *env ? env : ".";
}

inline std::filesystem::path out_path(const std::string& dir,
                                      const std::string& name) {
  std::filesystem::create_directories(dir);
  return std::filesystem::path(dir) / name;
}

inline void write_text(const std::filesystem::path& path,
                       const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for write: " + path.string());
  out << text;
  if (!out) throw IoError("short write: " + path.string());
}

inline std::vector<int> parse_int_list(const std::string& s,
                                       const char* what) {
  std::vector<int> out;
  for (const auto& tok : split_list(s, ',')) out.push_back(parse_int(tok, what));
  return out;
}

inline std::vector<NoiseSpec> parse_noise_list(const std::string& s) {
  std::vector<NoiseSpec> out;
  for (const auto& tok : split_list(s, ',')) out.push_back(noise_from_name(tok));
  return out;
}

inline std::vector<LossVariant> parse_variant_list(const std::string& s) {
  std::vector<LossVariant> out;
  for (const auto& tok : split_list(s, ','))
    out.push_back(variant_from_name(tok));
  return out;
}

inline SuccessorFn oracle_provider_for(const SaeModel& m,
                                       const WorldConfig& world) {
  return oracle_provider(
      ama1_build(detail::bench_oracle_pairs(m, world, std::size_t(1) << 20)));
}

inline const char* kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::Sae:
      return "state autoencoder";
    case ModelKind::Aae:
      return "action autoencoder";
    case ModelKind::Ad:
      return "action discriminator";
  }
  return "?";
}

template <typename NetLike>
std::size_t net_param_count(const NetLike& net) {
  std::size_t c = 0;
  for (const auto& l : net.layers) c += l.W.size() + l.B.size();
  return c;
}

template <typename NetLike>
std::string net_dims(const NetLike& net) {
  std::string s = std::to_string(net.layers.front().in);
  for (const auto& l : net.layers) s += "->" + std::to_string(l.out);
  return s;
}

}  // namespace cli_detail

inline int cli_main(int argc, char** argv) {
  using cli_detail::out_path;
  using cli_detail::usage;
  namespace cd = cli_detail;

  CLI::App app{
      "zsnn: propositional-state autoencoders, action-model acquisition, and "
      "latent-space planning on procedural puzzle worlds"};
  app.require_subcommand(1);
  int rc = 0;

  std::string out_dir = cd::default_out_dir();
  app.add_option("--out", out_dir,
                 "output directory (default: $ZSNN_OUT or '.')")
      ->capture_default_str();

  // ---- gen ---------------------------------------------------------------
  struct {
    std::string world = "lightsout3";
    int count = 200;
    std::uint64_t seed = 0;
    std::string noise = "none";
  } gen;
  auto* gen_cmd = app.add_subcommand(
      "gen", "sample a transition dataset and write IDX images + manifest");
  gen_cmd->add_option("--world", gen.world, "world name, e.g. lightsout3")
      ->capture_default_str();
  gen_cmd->add_option("--count", gen.count, "transition pairs to sample")
      ->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "rng seed")->capture_default_str();
  gen_cmd->add_option("--noise", gen.noise, "noise applied to the images")
      ->capture_default_str();
  gen_cmd->callback([&] {
    auto world = usage([&] { return world_from_name(gen.world); });
    auto noise = usage([&] { return noise_from_name(gen.noise); });
    if (gen.count < 1) throw cd::UsageFailure{"gen: --count must be >= 1"};
    Rng rng(gen.seed);
    auto data = sample_transitions(world, gen.count, rng);
    std::vector<Image> pre, suc;
    Rng nrng(derive_seed(gen.seed, 0x9015e));
    for (auto& p : data.pairs) {
      pre.push_back(apply_noise(p.pre_image, noise, nrng));
      suc.push_back(apply_noise(p.suc_image, noise, nrng));
    }
    const std::string base = world_name(world);
    auto pre_path = out_path(out_dir, base + "-pre.idx");
    auto suc_path = out_path(out_dir, base + "-suc.idx");
    write_idx_images(pre_path.string(), pre);
    write_idx_images(suc_path.string(), suc);
    nlohmann::ordered_json manifest;
    manifest["world"] = base;
    manifest["count"] = gen.count;
    manifest["seed"] = gen.seed;
    manifest["noise"] = noise_name(noise);
    manifest["image_width"] = world.img_w();
    manifest["image_height"] = world.img_h();
    manifest["pre_images"] = pre_path.filename().string();
    manifest["suc_images"] = suc_path.filename().string();
    cd::write_text(out_path(out_dir, base + "-manifest.json"),
                   manifest.dump(2) + "\n");
    std::cout << "wrote " << pre_path.string() << ", " << suc_path.string()
              << " (" << gen.count << " pairs)\n";
  });

  // ---- train -------------------------------------------------------------
  struct {
    std::string world = "lightsout3";
    std::string variant = "zsae:0.7";
    int n = 72;
    int seed = 0;
    int epochs = 200;
    int batch = 64;
    double lr = 1e-3;
    int hidden = 400;
    double dropout = 0.4;
    std::string model_out;
  } tr;
  auto* train_cmd = app.add_subcommand(
      "train", "train one state-autoencoder cell and save the model");
  train_cmd->add_option("--world", tr.world)->capture_default_str();
  train_cmd
      ->add_option("--variant", tr.variant, "ng | sae | zsae:<alpha>")
      ->capture_default_str();
  train_cmd->add_option("--n", tr.n, "latent bits")->capture_default_str();
  train_cmd->add_option("--seed", tr.seed)->capture_default_str();
  train_cmd->add_option("--epochs", tr.epochs)->capture_default_str();
  train_cmd->add_option("--batch", tr.batch)->capture_default_str();
  train_cmd->add_option("--lr", tr.lr)->capture_default_str();
  train_cmd->add_option("--hidden", tr.hidden)->capture_default_str();
  train_cmd->add_option("--dropout", tr.dropout)->capture_default_str();
  train_cmd->add_option("--model-out", tr.model_out,
                        "model file path (default: canonical name in --out)");
  train_cmd->callback([&] {
    auto world = usage([&] { return world_from_name(tr.world); });
    auto variant = usage([&] { return variant_from_name(tr.variant); });
    TrainConfig cfg;
    cfg.epochs = tr.epochs;
    cfg.batch_size = tr.batch;
    cfg.lr = tr.lr;
    std::vector<EpochStats> history;
    SaeModel m =
        train_sae_cell(world, variant, tr.n, cfg, tr.seed, tr.hidden,
                       static_cast<float>(tr.dropout), &history);
    const std::string path =
        tr.model_out.empty()
            ? out_path(out_dir,
                       sae_cell_filename(world, variant, tr.n, tr.seed))
                  .string()
            : tr.model_out;
    save_model(m, path);
    std::string csv = "epoch,rec,kl,penalty,tau,total\n";
    for (std::size_t e = 0; e < history.size(); ++e) {
      const auto& h = history[e];
      csv += std::to_string(e) + ',' + detail::fmt_real(h.rec) + ',' +
             detail::fmt_real(h.kl) + ',' + detail::fmt_real(h.penalty) +
             ',' + detail::fmt_real(h.tau) + ',' + detail::fmt_real(h.total) +
             '\n';
    }
    cd::write_text(path + ".history.csv", csv);
    std::cout << "trained " << variant_name(variant) << " n=" << tr.n
              << " seed=" << tr.seed << " on " << world_name(world)
              << ": final loss " << detail::fmt_real(history.back().total)
              << "\nsaved " << path << "\n";
  });

  // ---- train-ama2 --------------------------------------------------------
  struct {
    std::string sae;
    std::string world = "lightsout3";
    int pairs = 0;  // 0 = full enumerated transition relation
    int A = 16;
    int epochs = 500;
    int ad_epochs = 50;
    int batch = 64;
    double lr = 1e-3;
    int hidden = 256;
    std::uint64_t seed = 0;
    std::string aae_out, ad_out;
  } ta;
  auto* ama2_cmd = app.add_subcommand(
      "train-ama2",
      "train the action autoencoder + discriminator over a state "
      "autoencoder's encodings");
  ama2_cmd->add_option("--sae", ta.sae, "trained state-autoencoder file")
      ->required();
  ama2_cmd->add_option("--world", ta.world)->capture_default_str();
  ama2_cmd->add_option("--pairs", ta.pairs,
                       "sampled transition count (0 = enumerate all)")
      ->capture_default_str();
  ama2_cmd->add_option("--actions", ta.A, "action label budget A")
      ->capture_default_str();
  ama2_cmd->add_option("--epochs", ta.epochs)->capture_default_str();
  ama2_cmd->add_option("--ad-epochs", ta.ad_epochs)->capture_default_str();
  ama2_cmd->add_option("--batch", ta.batch)->capture_default_str();
  ama2_cmd->add_option("--lr", ta.lr)->capture_default_str();
  ama2_cmd->add_option("--hidden", ta.hidden)->capture_default_str();
  ama2_cmd->add_option("--seed", ta.seed)->capture_default_str();
  ama2_cmd->add_option("--aae-out", ta.aae_out);
  ama2_cmd->add_option("--ad-out", ta.ad_out);
  ama2_cmd->callback([&] {
    auto world = usage([&] { return world_from_name(ta.world); });
    if (ta.A < 2) throw cd::UsageFailure{"train-ama2: --actions must be >= 2"};
    SaeModel sae = load_sae(ta.sae);
    EncodedTransitions enc;
    if (ta.pairs <= 0) {
      enc = detail::bench_oracle_pairs(sae, world, std::size_t(1) << 20);
    } else {
      Rng srng(derive_seed(ta.seed, 0x5a3));
      enc = encode_transitions(sae, sample_transitions(world, ta.pairs, srng),
                               world_name(world) + "-sampled");
    }
    TrainConfig cfg;
    cfg.epochs = ta.epochs;
    cfg.batch_size = ta.batch;
    cfg.lr = ta.lr;
    Rng rng(ta.seed);
    AaeModel aae = aae_train(enc, ta.A, cfg, rng, ta.hidden);

    std::vector<BitVec> pool;
    {
      std::set<BitVec> uniq;
      for (const auto& [s, t] : enc.pairs) {
        uniq.insert(s);
        uniq.insert(t);
      }
      pool.assign(uniq.begin(), uniq.end());
    }
    Rng nrng(derive_seed(ta.seed, 0xad));
    auto negatives = negative_sampling(enc, pool, nrng, 1);
    TrainConfig ad_cfg = cfg;
    ad_cfg.epochs = ta.ad_epochs;
    Rng adrng(derive_seed(ta.seed, 0xad2));
    AdModel ad = ad_train(enc.pairs, negatives, ad_cfg, adrng, ta.hidden);

    const std::string base = world_name(world);
    const std::string aae_path =
        ta.aae_out.empty() ? out_path(out_dir, "aae-" + base + ".zsnn").string()
                           : ta.aae_out;
    const std::string ad_path =
        ta.ad_out.empty() ? out_path(out_dir, "ad-" + base + ".zsnn").string()
                          : ta.ad_out;
    save_model(aae, aae_path);
    save_model(ad, ad_path);
    nlohmann::ordered_json j;
    j["transitions"] = enc.pairs.size();
    j["aae_bit_accuracy"] = aae_roundtrip_accuracy(aae, enc);
    j["ad_accuracy"] = ad_accuracy(ad, enc.pairs, negatives);
    j["aae_file"] = aae_path;
    j["ad_file"] = ad_path;
    std::cout << j.dump(2) << "\n";
  });

  // ---- metrics -----------------------------------------------------------
  struct {
    std::string world = "lightsout3";
    std::string variants = "ng,sae,zsae:0.7";
    int n = 72;
    std::string seeds = "1,2,3";
    std::string noises = "none,gaussian:0.3,salt_pepper:0.06";
    int epochs = 200;
    std::uint64_t seed = 0;
    std::string format = "csv";
    std::string out_file;
    bool fresh = false;
  } me;
  auto* metrics_cmd = app.add_subcommand(
      "metrics",
      "stability report (variance / effective bits / reconstruction error) "
      "over a variant grid");
  metrics_cmd->add_option("--world", me.world)->capture_default_str();
  metrics_cmd->add_option("--variants", me.variants, "comma list")
      ->capture_default_str();
  metrics_cmd->add_option("--n", me.n, "latent bits")->capture_default_str();
  metrics_cmd->add_option("--seeds", me.seeds, "comma list")
      ->capture_default_str();
  metrics_cmd->add_option("--noises", me.noises, "comma list")
      ->capture_default_str();
  metrics_cmd->add_option("--epochs", me.epochs, "training epochs per cell")
      ->capture_default_str();
  metrics_cmd->add_option("--seed", me.seed, "report protocol seed")
      ->capture_default_str();
  metrics_cmd->add_option("--format", me.format, "csv | json")
      ->capture_default_str();
  metrics_cmd->add_option("--out-file", me.out_file,
                          "write the report here instead of stdout");
  metrics_cmd->add_flag("--fresh", me.fresh,
                        "retrain even when a cached model file exists");
  metrics_cmd->callback([&] {
    auto world = usage([&] { return world_from_name(me.world); });
    auto variants = usage([&] { return cd::parse_variant_list(me.variants); });
    auto seeds = usage([&] { return cd::parse_int_list(me.seeds, "seeds"); });
    auto noises = usage([&] { return cd::parse_noise_list(me.noises); });
    if (me.format != "csv" && me.format != "json")
      throw cd::UsageFailure{"metrics: --format must be csv or json"};
    TrainConfig cfg;
    cfg.epochs = me.epochs;
    std::vector<ReportCell> cells;
    for (const auto& v : variants) {
      ReportCell cell;
      cell.world = world_name(world);
      cell.config = world;
      for (int s : seeds) {
        cell.seeds.push_back(s);
        if (me.fresh) {
          SaeModel m = train_sae_cell(world, v, me.n, cfg, s);
          save_model(m, out_path(out_dir,
                                 sae_cell_filename(world, v, me.n, s))
                            .string());
          cell.models.push_back(std::move(m));
        } else {
          cell.models.push_back(
              ensure_sae_cell(out_dir, world, v, me.n, cfg, s));
        }
      }
      cells.push_back(std::move(cell));
    }
    ReportProtocol protocol;
    protocol.noises = noises;
    protocol.seed = me.seed;
    auto rows = representation_report(cells, protocol);
    std::string text =
        me.format == "csv" ? report_csv(rows) : report_json(rows) + "\n";
    if (me.out_file.empty())
      std::cout << text;
    else
      cd::write_text(me.out_file, text);
  });

  // ---- plan --------------------------------------------------------------
  struct {
    std::string sae;
    std::string world = "lightsout3";
    std::string init, goal;
    std::string heuristic = "goal-count";
    std::string provider = "oracle";
    std::string aae, ad;
    double theta = 0.5;
    std::int64_t max_expansions = 1'000'000;
    double max_seconds = 60.0;
    std::string strip_out, json_out;
  } pl;
  auto* plan_cmd = app.add_subcommand(
      "plan", "solve one instance given init and goal images");
  plan_cmd->add_option("--sae", pl.sae, "trained state-autoencoder file")
      ->required();
  plan_cmd->add_option("--world", pl.world)->capture_default_str();
  plan_cmd->add_option("--init", pl.init, "init image (PGM)")->required();
  plan_cmd->add_option("--goal", pl.goal, "goal image (PGM)")->required();
  plan_cmd->add_option("--heuristic", pl.heuristic, "blind | goal-count")
      ->capture_default_str();
  plan_cmd
      ->add_option("--provider", pl.provider,
                   "oracle | ama2 (needs --aae and --ad)")
      ->capture_default_str();
  plan_cmd->add_option("--aae", pl.aae);
  plan_cmd->add_option("--ad", pl.ad);
  plan_cmd->add_option("--theta", pl.theta, "discriminator threshold")
      ->capture_default_str();
  plan_cmd->add_option("--max-expansions", pl.max_expansions)
      ->capture_default_str();
  plan_cmd->add_option("--max-seconds", pl.max_seconds)->capture_default_str();
  plan_cmd->add_option("--strip", pl.strip_out,
                       "write the decoded plan as a PGM film strip");
  plan_cmd->add_option("--json", pl.json_out, "write a JSON result here");
  plan_cmd->callback([&] {
    auto world = usage([&] { return world_from_name(pl.world); });
    auto heuristic =
        usage([&] { return heuristic_from_name(pl.heuristic); });
    if (pl.provider != "oracle" && pl.provider != "ama2")
      throw cd::UsageFailure{"plan: --provider must be oracle or ama2"};
    if (pl.provider == "ama2" && (pl.aae.empty() || pl.ad.empty()))
      throw cd::UsageFailure{"plan: --provider ama2 needs --aae and --ad"};

    SaeModel sae = load_sae(pl.sae);
    Image init_img = read_pgm(pl.init);
    Image goal_img = read_pgm(pl.goal);
    SuccessorFn provider;
    if (pl.provider == "oracle") {
      provider = cd::oracle_provider_for(sae, world);
    } else {
      provider = learned_provider(load_aae(pl.aae), load_ad(pl.ad), pl.theta);
    }
    SearchLimits limits;
    limits.max_expansions = pl.max_expansions;
    limits.max_seconds = pl.max_seconds;
    auto solved = solve_instance(sae, provider, init_img, goal_img, world,
                                 heuristic, limits);

    nlohmann::ordered_json j;
    j["outcome"] = detail::outcome_name(solved.search.outcome);
    j["cost"] = solved.search.outcome == SearchOutcome::Plan
                    ? nlohmann::ordered_json(solved.search.plan.cost)
                    : nlohmann::ordered_json(nullptr);
    j["expansions"] = solved.search.stats.expansions;
    j["evaluations"] = solved.search.stats.evaluations;
    j["valid"] = solved.verdict.ok;
    j["verdict"] = solved.verdict.ok ? "ok" : solved.verdict.reason;
    if (!pl.json_out.empty()) cd::write_text(pl.json_out, j.dump(2) + "\n");
    std::cout << j.dump(2) << "\n";
    if (solved.search.outcome == SearchOutcome::Plan && !pl.strip_out.empty())
      emit_plan_strip(solved.frames, pl.strip_out);
    if (!solved.success) {
      std::cerr << "plan failed: "
                << (solved.search.outcome != SearchOutcome::Plan
                        ? detail::outcome_name(solved.search.outcome)
                        : solved.verdict.reason)
                << "\n";
      rc = 1;
    }
  });

  // ---- bench -------------------------------------------------------------
  struct {
    std::string config;
    std::string world = "lightsout3";
    std::string variants = "sae,zsae:0.7";
    int n = 72;
    std::string seeds = "1";
    std::string walks = "7,14";
    int instances = 10;
    std::string noises = "none,gaussian:0.3,salt_pepper:0.06";
    int epochs = 200;
    std::uint64_t seed = 0;
    std::int64_t max_expansions = 1'000'000;
    double max_seconds = 60.0;
    std::string heuristic = "goal-count";
    bool timings = false;
    bool load_only = false;
    std::string models_dir;
  } be;
  auto* bench_cmd = app.add_subcommand(
      "bench", "planning success/expansion suite over an experiment grid");
  bench_cmd->add_option("--config", be.config,
                        "experiment JSON (overrides the grid flags)");
  bench_cmd->add_option("--world", be.world)->capture_default_str();
  bench_cmd->add_option("--variants", be.variants)->capture_default_str();
  bench_cmd->add_option("--n", be.n)->capture_default_str();
  bench_cmd->add_option("--seeds", be.seeds)->capture_default_str();
  bench_cmd->add_option("--walks", be.walks)->capture_default_str();
  bench_cmd->add_option("--instances", be.instances)->capture_default_str();
  bench_cmd->add_option("--noises", be.noises)->capture_default_str();
  bench_cmd->add_option("--epochs", be.epochs)->capture_default_str();
  bench_cmd->add_option("--seed", be.seed)->capture_default_str();
  bench_cmd->add_option("--max-expansions", be.max_expansions)
      ->capture_default_str();
  bench_cmd->add_option("--max-seconds", be.max_seconds)
      ->capture_default_str();
  bench_cmd->add_option("--heuristic", be.heuristic)->capture_default_str();
  bench_cmd->add_flag("--timings", be.timings,
                      "record wall times (breaks byte-for-byte stability)");
  bench_cmd->add_flag(
      "--load-only", be.load_only,
      "never train: a missing model file is a configuration error");
  bench_cmd->add_option("--models", be.models_dir,
                        "model cache directory (default: --out)");
  bench_cmd->callback([&] {
    ExperimentConfig cfg;
    if (!be.config.empty()) {
      std::ifstream in(be.config);
      if (!in) throw IoError("bench: cannot open config " + be.config);
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        throw cd::UsageFailure{std::string("bench: bad config JSON: ") +
                               e.what()};
      }
      cfg = usage([&] { return experiment_from_json(j); });
    } else {
      cfg.world = usage([&] { return world_from_name(be.world); });
      auto vs = usage([&] { return cd::parse_variant_list(be.variants); });
      for (const auto& v : vs) cfg.variants.emplace_back(v, be.n);
      cfg.seeds = usage([&] { return cd::parse_int_list(be.seeds, "seeds"); });
      cfg.walk_lengths =
          usage([&] { return cd::parse_int_list(be.walks, "walks"); });
      cfg.instances_per_cell = be.instances;
      cfg.noises = usage([&] { return cd::parse_noise_list(be.noises); });
      cfg.train.epochs = be.epochs;
      cfg.base_seed = be.seed;
      cfg.limits.max_expansions = be.max_expansions;
      cfg.limits.max_seconds = be.max_seconds;
      cfg.heuristic = usage([&] { return heuristic_from_name(be.heuristic); });
      cfg.timings = be.timings;
      usage([&] {
        validate_experiment(cfg);
        return 0;
      });
    }
    const std::string models_dir =
        be.models_dir.empty() ? out_dir : be.models_dir;
    SaeCellFn cell_fn = [&](const LossVariant& v, int n, int seed) {
      if (be.load_only) {
        namespace fs = std::filesystem;
        auto p = fs::path(models_dir) /
                 sae_cell_filename(cfg.world, v, n, seed);
        if (!fs::exists(p))
          throw IoError("bench: missing model file " + p.string() +
                        " (train it or drop --load-only)");
        return load_sae(p.string());
      }
      return ensure_sae_cell(models_dir, cfg.world, v, n, cfg.train, seed);
    };
    auto result = run_bench(cfg, cell_fn);
    auto csv_path = out_path(out_dir, "bench.csv");
    auto json_path = out_path(out_dir, "bench.json");
    cd::write_text(csv_path, result.csv);
    cd::write_text(json_path, result.summary.dump(2) + "\n");
    std::cout << result.summary.dump(2) << "\nwrote " << csv_path.string()
              << ", " << json_path.string() << "\n";
  });

  // ---- prune -------------------------------------------------------------
  struct {
    std::string model;
    std::string world = "lightsout3";
    std::string probe_idx;
    std::string model_out;
  } pr;
  auto* prune_cmd = app.add_subcommand(
      "prune", "fold constant-false latent bits out of a state autoencoder");
  prune_cmd->add_option("--model", pr.model)->required();
  prune_cmd->add_option("--world", pr.world,
                        "probe images = the world's enumerated states")
      ->capture_default_str();
  prune_cmd->add_option("--probe-idx", pr.probe_idx,
                        "probe images from an IDX file instead");
  prune_cmd->add_option("--model-out", pr.model_out,
                        "pruned model path (default: <model>.pruned.zsnn)");
  prune_cmd->callback([&] {
    SaeModel m = load_sae(pr.model);
    std::vector<Image> probes;
    if (!pr.probe_idx.empty()) {
      probes = read_idx_images(pr.probe_idx);
    } else {
      auto world = usage([&] { return world_from_name(pr.world); });
      for (const auto& s : enumerate_states(world, std::size_t(1) << 20))
        probes.push_back(render(s, world));
    }
    auto dead = find_constant_bits(m, probes);
    auto [pruned, report] = prune(m, dead);
    const std::string path =
        pr.model_out.empty() ? pr.model + ".pruned.zsnn" : pr.model_out;
    save_model(pruned, path);
    nlohmann::ordered_json j;
    j["probe_images"] = probes.size();
    j["n_before"] = m.latent.N;
    j["n_after"] = pruned.latent.N;
    j["dropped_bits"] = dead;
    j["floats_removed_prev"] = report.floats_removed_prev;
    j["floats_removed_next"] = report.floats_removed_next;
    j["total_before"] = report.total_before;
    j["total_after"] = report.total_after;
    j["model_out"] = path;
    std::cout << j.dump(2) << "\n";
  });

  // ---- export-pddl -------------------------------------------------------
  struct {
    std::string sae;
    std::string world = "lightsout3";
    std::string domain_name;
    std::string init, goal;
    int walk = 7;
    std::uint64_t seed = 0;
  } ex;
  auto* pddl_cmd = app.add_subcommand(
      "export-pddl",
      "emit the oracle transition graph as a STRIPS domain + problem");
  pddl_cmd->add_option("--sae", ex.sae)->required();
  pddl_cmd->add_option("--world", ex.world)->capture_default_str();
  pddl_cmd->add_option("--domain-name", ex.domain_name,
                       "defaults to the world name");
  pddl_cmd->add_option("--init", ex.init,
                       "init image (PGM); default: seeded random walk");
  pddl_cmd->add_option("--goal", ex.goal,
                       "goal image (PGM); default: the solved state");
  pddl_cmd->add_option("--walk", ex.walk, "walk length for the default init")
      ->capture_default_str();
  pddl_cmd->add_option("--seed", ex.seed)->capture_default_str();
  pddl_cmd->callback([&] {
    auto world = usage([&] { return world_from_name(ex.world); });
    SaeModel sae = load_sae(ex.sae);
    auto oracle = ama1_build(
        detail::bench_oracle_pairs(sae, world, std::size_t(1) << 20));
    Rng rng(ex.seed);
    const WorldState solved = solved_state(world);
    Image goal_img = ex.goal.empty() ? render(solved, world)
                                     : read_pgm(ex.goal);
    Image init_img =
        ex.init.empty()
            ? render(random_walk(solved, ex.walk, world, rng), world)
            : read_pgm(ex.init);
    const std::string name =
        ex.domain_name.empty() ? world_name(world) : ex.domain_name;
    auto exported = export_pddl(oracle, name, encode_argmax(sae, init_img),
                                encode_argmax(sae, goal_img));
    PddlDomainInfo dom;
    auto issues = pddl_check_domain(exported.domain, &dom);
    auto pissues = pddl_check_problem(exported.problem, dom);
    auto dom_path = out_path(out_dir, name + "-domain.pddl");
    auto prob_path = out_path(out_dir, name + "-problem.pddl");
    cd::write_text(dom_path, exported.domain);
    cd::write_text(prob_path, exported.problem);
    std::cout << "wrote " << dom_path.string() << " (" << dom.actions.size()
              << " actions), " << prob_path.string() << "\n";
    for (const auto& i : issues) std::cerr << "domain issue: " << i << "\n";
    for (const auto& i : pissues) std::cerr << "problem issue: " << i << "\n";
    if (!issues.empty() || !pissues.empty()) rc = 1;
  });

  // ---- inspect -----------------------------------------------------------
  struct {
    std::string model;
  } in_;
  auto* inspect_cmd =
      app.add_subcommand("inspect", "print a saved model's summary");
  inspect_cmd->add_option("--model", in_.model)->required();
  inspect_cmd->callback([&] {
    auto loaded = load_model(in_.model);
    std::cout << "file: " << in_.model << "\nkind: "
              << cd::kind_name(loaded.kind) << "\n";
    if (loaded.sae) {
      const auto& m = *loaded.sae;
      std::cout << "image: " << m.img_w << "x" << m.img_h
                << "\nlatent bits: " << m.latent.N
                << "\nvariant: " << variant_name(m.variant)
                << "\ntau: " << m.latent.tau.tau_max << " -> "
                << m.latent.tau.tau_min
                << "\ntrained epochs: " << m.trained_epochs
                << "\nencoder: " << cd::net_dims(m.encoder)
                << "\ndecoder: " << cd::net_dims(m.decoder) << "\nparameters: "
                << cd::net_param_count(m.encoder) +
                       cd::net_param_count(m.decoder)
                << "\n";
    } else if (loaded.aae) {
      const auto& m = *loaded.aae;
      std::cout << "action labels: " << m.A << "\nlatent bits: " << m.N
                << "\ntau: " << m.tau.tau_max << " -> " << m.tau.tau_min
                << "\ntrained epochs: " << m.trained_epochs
                << "\nencoder: " << cd::net_dims(m.encoder)
                << "\ndecoder: " << cd::net_dims(m.decoder) << "\nparameters: "
                << cd::net_param_count(m.encoder) +
                       cd::net_param_count(m.decoder)
                << "\n";
    } else if (loaded.ad) {
      const auto& m = *loaded.ad;
      std::cout << "latent bits: " << m.n_bits
                << "\ntrained epochs: " << m.trained_epochs
                << "\nclassifier: " << cd::net_dims(m.net)
                << "\nparameters: " << cd::net_param_count(m.net) << "\n";
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const cli_detail::UsageFailure& u) {
    std::cerr << "usage error: " << u.msg << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}

}  // namespace zsnn
