#include "cdpinfer/slice.hpp"

#include <cmath>
#include <stdexcept>

#include "cdpinfer/errors.hpp"

namespace cdp {

SliceResult slice_update(const std::function<double(double)>& log_density,
                         double x0, double log_fx0, const SliceOptions& options,
                         RngState& rng) {
  if (!(options.width > 0.0) || !std::isfinite(options.width)) {
    throw std::invalid_argument("slice_update: non-finite slice width");
  }
  if (!std::isfinite(log_fx0)) {
    throw NumericalError("slice_update: current state has zero density");
  }
  const double log_level = log_fx0 + std::log(rng.uniform01());

  // Stepping out, budget split at random between the two sides.
  double left = x0 - options.width * rng.uniform01();
  double right = left + options.width;
  auto j = static_cast<std::size_t>(
      std::floor(static_cast<double>(options.max_step_out) * rng.uniform01()));
  std::size_t k = options.max_step_out - 1 - j;
  while (j > 0 && left > options.lower && log_density(left) > log_level) {
    left -= options.width;
    --j;
  }
  while (k > 0 && right < options.upper && log_density(right) > log_level) {
    right += options.width;
    --k;
  }
  if (left < options.lower) left = options.lower;
  if (right > options.upper) right = options.upper;

  // Shrinkage.
  for (int iter = 0; iter < 1000; ++iter) {
    const double x1 = rng.uniform(left, right);
    const double log_fx1 = log_density(x1);
    if (log_fx1 > log_level) return {x1, log_fx1};
    if (x1 < x0) {
      left = x1;
    } else {
      right = x1;
    }
  }
  throw NumericalError("slice_update: shrinkage failed to find an acceptable point");
}

}  // namespace cdp
