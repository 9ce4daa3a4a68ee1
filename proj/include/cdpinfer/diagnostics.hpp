#pragma once

#include <span>
#include <vector>

#include "cdpinfer/rng.hpp"
#include "cdpinfer/samples.hpp"

namespace cdp {

/// Normalized importance weights from log-weights (max-subtracted).
/// Entries of -infinity get weight 0. Throws NumericalError if no entry is
/// finite.
std::vector<double> normalize_log_weights(std::span<const double> log_weights);

/// Effective sample size 1 / sum(w~^2) of self-normalized weights.
double importance_ess(std::span<const double> log_weights);

/// Multinomial resampling: n_out indices drawn with replacement proportional
/// to the given normalized weights.
std::vector<std::size_t> resample_indices(std::span<const double> weights,
                                          std::size_t n_out, RngState& rng);

/// Weighted quantile (smallest value whose cumulative weight reaches q).
double weighted_quantile(std::span<const double> values,
                         std::span<const double> weights, double q);

/// Per-parameter means, sds and equal-tailed credible intervals. Uses the
/// stored log-weights when present.
SummaryReport summarize(const WeightedSamples& samples, double credible_level);

}  // namespace cdp
