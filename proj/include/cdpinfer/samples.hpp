#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cdp {

/// Shared sampler settings. Optional fields fall back to data-driven
/// defaults inside each sampler.
struct SamplerConfig {
  std::size_t iterations = 10000;
  std::size_t burn_in = 5000;
  std::uint64_t seed = 20250810;
  std::optional<double> slice_width;      // default: IQR(data)/2
  std::size_t max_doublings = 50;         // step-out budget per slice move
  std::optional<std::size_t> truncation;  // default: default_truncation(A)
  std::size_t prior_draws = 5000;         // simulation size for KDE priors
  double min_ess = 100.0;                 // warn below this
  double credible_level = 0.95;
  std::size_t threads = 1;

  void validate() const;
};

struct ParameterSummary {
  std::string name;
  double mean = 0.0;
  double sd = 0.0;
  double ci_lower = 0.0;
  double ci_upper = 0.0;
};

struct SummaryReport {
  std::vector<ParameterSummary> parameters;
  double ess = 0.0;
  std::size_t n_draws = 0;
  double credible_level = 0.95;
  std::vector<std::string> warnings;
};

/// Posterior draws with optional importance log-weights. Draws are stored
/// row-major (n_draws x dim).
struct WeightedSamples {
  std::vector<std::string> names;
  std::size_t dim = 0;
  std::vector<double> draws;
  std::optional<std::vector<double>> log_weights;
  double ess = 0.0;
  std::vector<std::string> warnings;

  std::size_t n_draws() const { return dim == 0 ? 0 : draws.size() / dim; }
  std::span<const double> row(std::size_t t) const {
    return {draws.data() + t * dim, dim};
  }
  /// All values of coordinate j as a contiguous copy.
  std::vector<double> column(std::size_t j) const;
};

}  // namespace cdp
