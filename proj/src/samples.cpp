#include "cdpinfer/samples.hpp"

#include <stdexcept>

namespace cdp {

void SamplerConfig::validate() const {
  if (iterations == 0) throw std::invalid_argument("config: iterations must be positive");
  if (iterations <= burn_in) {
    throw std::invalid_argument("config: iterations must exceed burn_in");
  }
  if (slice_width && !(*slice_width > 0.0)) {
    throw std::invalid_argument("config: slice_width must be positive");
  }
  if (max_doublings == 0) throw std::invalid_argument("config: max_doublings must be positive");
  if (truncation && *truncation == 0) {
    throw std::invalid_argument("config: truncation must be positive");
  }
  if (prior_draws == 0) throw std::invalid_argument("config: prior_draws must be positive");
  if (!(min_ess > 0.0)) throw std::invalid_argument("config: min_ess must be positive");
  if (!(credible_level > 0.0 && credible_level < 1.0)) {
    throw std::invalid_argument("config: credible_level must lie in (0,1)");
  }
  if (threads == 0) throw std::invalid_argument("config: threads must be positive");
}

std::vector<double> WeightedSamples::column(std::size_t j) const {
  std::vector<double> out(n_draws());
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = draws[t * dim + j];
  return out;
}

}  // namespace cdp
