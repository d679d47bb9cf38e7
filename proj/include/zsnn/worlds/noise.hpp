#pragma once

#include "zsnn/errors.hpp"
#include "zsnn/image.hpp"
#include "zsnn/rng.hpp"

namespace zsnn {

enum class NoiseKind { None, Gaussian, SaltPepper };

struct NoiseSpec {
  NoiseKind kind = NoiseKind::None;
  double sigma = 0.0;  // Gaussian std dev
  double p = 0.0;      // SaltPepper per-pixel corruption probability

  static NoiseSpec none() { return {}; }
  static NoiseSpec gaussian(double sigma) {
    if (sigma < 0) throw ParamError("gaussian noise: sigma must be >= 0");
    NoiseSpec s;
    s.kind = NoiseKind::Gaussian;
    s.sigma = sigma;
    return s;
  }
  static NoiseSpec salt_pepper(double p) {
    if (p < 0 || p > 1) throw ParamError("salt_pepper: p must be in [0,1]");
    NoiseSpec s;
    s.kind = NoiseKind::SaltPepper;
    s.p = p;
    return s;
  }
};

inline Image apply_noise(const Image& img, const NoiseSpec& spec, Rng& rng) {
  Image out = img;
  switch (spec.kind) {
    case NoiseKind::None:
      break;
    case NoiseKind::Gaussian:
      for (auto& v : out.px) {
        v += static_cast<float>(rng.normal() * spec.sigma);
        if (v < 0.0f) v = 0.0f;
        if (v > 1.0f) v = 1.0f;
      }
      break;
    case NoiseKind::SaltPepper:
      // One draw per pixel: u < p/2 -> pepper, u < p -> salt (50/50 split).
      for (auto& v : out.px) {
        double u = rng.uniform();
        if (u < spec.p) v = (u < spec.p * 0.5) ? 0.0f : 1.0f;
      }
      break;
  }
  return out;
}

}  // namespace zsnn
