#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "zsnn/harness/config.hpp"
#include "zsnn/io/model_file.hpp"
#include "zsnn/rng.hpp"
#include "zsnn/sae/sae.hpp"
#include "zsnn/worlds/worlds.hpp"

namespace zsnn {

// Training images for a state-autoencoder cell: every state when the space
// enumerates below the cap, otherwise a seeded sample of random states.
inline std::vector<Image> sae_training_images(const WorldConfig& world,
                                              std::uint64_t seed,
                                              std::size_t enum_cap = 4096,
                                              int sample_count = 2000) {
  std::vector<Image> images;
  try {
    for (const auto& s : enumerate_states(world, enum_cap))
      images.push_back(render(s, world));
    return images;
  } catch (const ResourceError&) {
    Rng rng(derive_seed(seed, 0xda7a));
    for (int i = 0; i < sample_count; ++i)
      images.push_back(render(random_state(world, rng), world));
    return images;
  }
}

// Canonical model-file name for a (world, variant, N, seed) training cell.
inline std::string sae_cell_filename(const WorldConfig& world,
                                     const LossVariant& variant, int n,
                                     int seed) {
  std::string v = variant_name(variant);
  for (auto& c : v)
    if (c == ':') c = '_';
  return "sae-" + world_name(world) + "-" + v + "-n" + std::to_string(n) +
         "-s" + std::to_string(seed) + ".zsnn";
}

// Deterministic cell training: the cell seed drives initialization, shuffling,
// dropout, and Gumbel draws; the dataset is the enumerated (or seeded-sample)
// state images of the world.
inline SaeModel train_sae_cell(const WorldConfig& world,
                               const LossVariant& variant, int n,
                               const TrainConfig& cfg, int seed,
                               int hidden = 400, float dropout = 0.4f,
                               std::vector<EpochStats>* history = nullptr) {
  auto images = sae_training_images(world, static_cast<std::uint64_t>(seed));
  LatentConfig latent;
  latent.N = n;
  Rng rng(static_cast<std::uint64_t>(seed));
  SaeModel m = make_sae<float>(world.img_w(), world.img_h(), latent, variant,
                               rng, hidden, dropout);
  auto hist = train(m, images, cfg, rng);
  if (history) *history = std::move(hist);
  return m;
}

// Load the cell's model from dir when a compatible file is present; train
// and save it otherwise. Compatibility = same latent width and epoch budget.
inline SaeModel ensure_sae_cell(const std::string& dir,
                                const WorldConfig& world,
                                const LossVariant& variant, int n,
                                const TrainConfig& cfg, int seed) {
  namespace fs = std::filesystem;
  const fs::path path =
      fs::path(dir) / sae_cell_filename(world, variant, n, seed);
  if (fs::exists(path)) {
    SaeModel m = load_sae(path.string());
    if (m.latent.N == n && m.trained_epochs == cfg.epochs &&
        m.img_w == world.img_w() && m.img_h == world.img_h())
      return m;
  }
  SaeModel m = train_sae_cell(world, variant, n, cfg, seed);
  fs::create_directories(path.parent_path());
  save_model(m, path.string());
  return m;
}

}  // namespace zsnn
