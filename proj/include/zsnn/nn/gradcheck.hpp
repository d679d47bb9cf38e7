#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace zsnn {

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t checked = 0;
  std::size_t skipped = 0;
};

/// Central finite differences over every element of every parameter array,
/// compared against the provided analytic gradients. loss() must re-evaluate
/// the scalar objective from the current parameter values (the arrays are
/// perturbed in place and restored). Elements where |analytic|+|numeric|
/// falls below skip_below are skipped: the relative error is meaningless at
/// that magnitude. Run at double precision; 32-bit rounding swamps h^2.
inline GradCheckResult gradcheck_central(
    const std::vector<std::vector<double>*>& params,
    const std::vector<const std::vector<double>*>& analytic,
    const std::function<double()>& loss, double h = 1e-5,
    double skip_below = 1e-8) {
  GradCheckResult res;
  for (std::size_t a = 0; a < params.size(); ++a) {
    auto& p = *params[a];
    const auto& g = *analytic[a];
    for (std::size_t i = 0; i < p.size(); ++i) {
      double saved = p[i];
      p[i] = saved + h;
      double lp = loss();
      p[i] = saved - h;
      double lm = loss();
      p[i] = saved;
      double numeric = (lp - lm) / (2.0 * h);
      double an = g[i];
      if (std::abs(an) + std::abs(numeric) < skip_below) {
        ++res.skipped;
        continue;
      }
      double denom = std::max(std::abs(an), std::abs(numeric));
      double rel = std::abs(an - numeric) / denom;
      if (rel > res.max_rel_error) res.max_rel_error = rel;
      ++res.checked;
    }
  }
  return res;
}

}  // namespace zsnn
