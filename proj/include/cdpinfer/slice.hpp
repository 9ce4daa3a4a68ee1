#pragma once

#include <functional>
#include <limits>

#include "cdpinfer/rng.hpp"

namespace cdp {

/// One univariate slice-sampling move (stepping-out then shrinkage) for an
/// unnormalized log density, optionally restricted to (lower, upper).
struct SliceOptions {
  double width = 1.0;
  std::size_t max_step_out = 50;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
};

struct SliceResult {
  double x;
  double log_density;
};

SliceResult slice_update(const std::function<double(double)>& log_density,
                         double x0, double log_fx0, const SliceOptions& options,
                         RngState& rng);

}  // namespace cdp
