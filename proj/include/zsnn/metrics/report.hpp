#pragma once

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "zsnn/metrics/stability.hpp"
#include "zsnn/worlds/worlds.hpp"

namespace zsnn {

// One table cell before aggregation: the same training recipe run under
// several seeds on one world.
struct ReportCell {
  std::string world;
  WorldConfig config;
  std::vector<SaeModel> models;  // one per seed
  std::vector<int> seeds;
};

struct ReportProtocol {
  int sample_count = 100;  // images drawn for variance / mse
  int trials = 100;        // noised encodes per image
  std::vector<NoiseSpec> noises = {NoiseSpec::none()};
  std::uint64_t seed = 0;
  std::size_t enumeration_cap = std::size_t(1) << 20;
};

namespace detail {

inline double median_real(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n % 2) return v[n / 2];
  return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Integer median; lower middle on even counts so the result is an
// observed value.
inline int median_int(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  return v[(v.size() - 1) / 2];
}

}  // namespace detail

// Effective bits over a world's full state enumeration, rendering one state
// at a time so large spaces never sit in memory whole.
template <typename T>
int effective_bits_world(const Sae<T>& m, const WorldConfig& cfg,
                         std::size_t cap = std::size_t(1) << 20) {
  validate_sae(m);
  const auto states = enumerate_states(cfg, cap);
  const int N = m.latent.N;
  std::vector<std::uint8_t> seen0(N, 0), seen1(N, 0);
  int undecided = N;
  for (const auto& s : states) {
    BitVec b = encode_argmax(m, render(s, cfg));
    for (int n = 0; n < N; ++n) {
      auto& flag = b.bits[n] ? seen1[n] : seen0[n];
      if (!flag) {
        flag = 1;
        if (seen0[n] && seen1[n]) --undecided;
      }
    }
    if (undecided == 0) break;
  }
  int count = 0;
  for (int n = 0; n < N; ++n) count += seen0[n] && seen1[n];
  return count;
}

// One row per (cell, noise); medians over the cell's seed models. Metrics
// that do not depend on the noise level are computed once per model.
inline std::vector<StabilityReport> representation_report(
    const std::vector<ReportCell>& cells, const ReportProtocol& protocol) {
  if (protocol.sample_count < 1 || protocol.trials < 2)
    throw ParamError("representation_report: bad protocol");
  std::vector<StabilityReport> rows;
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    const auto& cell = cells[ci];
    if (cell.models.empty() || cell.models.size() != cell.seeds.size())
      throw ParamError("representation_report: cell needs one seed per model");
    for (const auto& m : cell.models) {
      if (m.img_w != cell.config.img_w() || m.img_h != cell.config.img_h())
        throw ShapeError("representation_report: model does not fit world");
    }
    const auto states = enumerate_states(cell.config, protocol.enumeration_cap);
    Rng sample_rng(derive_seed(protocol.seed, ci));
    std::vector<std::size_t> order(states.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    sample_rng.shuffle(order);
    const std::size_t take =
        std::min<std::size_t>(protocol.sample_count, states.size());
    std::vector<Image> samples;
    samples.reserve(take);
    for (std::size_t i = 0; i < take; ++i)
      samples.push_back(render(states[order[i]], cell.config));

    std::vector<int> eb;
    std::vector<double> mse;
    for (const auto& m : cell.models) {
      eb.push_back(effective_bits_world(m, cell.config,
                                        protocol.enumeration_cap));
      mse.push_back(reconstruction_mse(m, samples));
    }

    for (std::size_t ni = 0; ni < protocol.noises.size(); ++ni) {
      const auto& noise = protocol.noises[ni];
      std::vector<double> var;
      for (std::size_t si = 0; si < cell.models.size(); ++si) {
        Rng noise_rng(derive_seed(derive_seed(protocol.seed, ci),
                                  (ni + 1) * 1000 + si));
        var.push_back(state_variance(cell.models[si], samples, protocol.trials,
                                     noise, noise_rng));
      }
      StabilityReport r;
      r.world = cell.world;
      r.mean_bit_variance = detail::median_real(var);
      r.effective_bits = detail::median_int(eb);
      r.mse = detail::median_real(mse);
      r.n_latent = cell.models.front().latent.N;
      r.variant = cell.models.front().variant;
      r.noise = noise;
      r.seeds = cell.seeds;
      rows.push_back(std::move(r));
    }
  }
  return rows;
}

namespace detail {

inline const char* noise_kind_name(NoiseKind k) {
  switch (k) {
    case NoiseKind::None:
      return "none";
    case NoiseKind::Gaussian:
      return "gaussian";
    case NoiseKind::SaltPepper:
      return "salt_pepper";
  }
  return "?";
}

inline double noise_param(const NoiseSpec& s) {
  switch (s.kind) {
    case NoiseKind::Gaussian:
      return s.sigma;
    case NoiseKind::SaltPepper:
      return s.p;
    default:
      return 0.0;
  }
}

inline std::string fmt_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

inline std::string report_csv(const std::vector<StabilityReport>& rows) {
  std::string out =
      "world,variant,N,alpha,noise_kind,noise_param,seed_count,"
      "variance,effective_bits,mse\n";
  for (const auto& r : rows) {
    out += r.world;
    out += ',';
    out += loss_name(r.variant.kind);
    out += ',';
    out += std::to_string(r.n_latent);
    out += ',';
    out += detail::fmt_real(r.variant.alpha);
    out += ',';
    out += detail::noise_kind_name(r.noise.kind);
    out += ',';
    out += detail::fmt_real(detail::noise_param(r.noise));
    out += ',';
    out += std::to_string(r.seeds.size());
    out += ',';
    out += detail::fmt_real(r.mean_bit_variance);
    out += ',';
    out += std::to_string(r.effective_bits);
    out += ',';
    out += detail::fmt_real(r.mse);
    out += '\n';
  }
  return out;
}

inline std::string report_json(const std::vector<StabilityReport>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({{"world", r.world},
                   {"variant", loss_name(r.variant.kind)},
                   {"N", r.n_latent},
                   {"alpha", r.variant.alpha},
                   {"noise_kind", detail::noise_kind_name(r.noise.kind)},
                   {"noise_param", detail::noise_param(r.noise)},
                   {"seed_count", r.seeds.size()},
                   {"variance", r.mean_bit_variance},
                   {"effective_bits", r.effective_bits},
                   {"mse", r.mse}});
  }
  return arr.dump(2);
}

}  // namespace zsnn
