#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cdpinfer/families.hpp"
#include "cdpinfer/rng.hpp"

namespace cdp {

/// Finite atom/weight representation of a random distribution F. Atoms are
/// d-dimensional points stored row-major; weights are non-negative and sum
/// to 1 within 1e-12 (checked at construction).
class DiscreteDistribution {
public:
  DiscreteDistribution(std::size_t dim, std::vector<double> atoms_flat,
                       std::vector<double> weights);

  static DiscreteDistribution univariate(std::vector<double> atoms,
                                         std::vector<double> weights);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return weights_.size(); }

  std::span<const double> atom(std::size_t i) const {
    return {atoms_.data() + i * dim_, dim_};
  }
  double atom1d(std::size_t i) const { return atoms_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }

  const std::vector<double>& atoms_flat() const noexcept { return atoms_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

private:
  std::size_t dim_;
  std::vector<double> atoms_;
  std::vector<double> weights_;
};

/// Smallest truncation level N with (A/(1+A))^N < 1e-10, capped at 10^4.
std::size_t default_truncation(double total_mass);

/// Truncated stick-breaking draw F ~ D_alpha with `truncation` Beta(1, A)
/// sticks plus one residual atom, so the weights sum to exactly 1. Atoms are
/// independent draws from the normalized base.
DiscreteDistribution stick_breaking_sample(const BaseMeasure& alpha,
                                           std::size_t truncation,
                                           RngState& rng);

/// Bayesian bootstrap draw F ~ D_{n F_n}: the n observations as atoms (ties
/// kept as separate indexed atoms) with flat-Dirichlet weights.
DiscreteDistribution bayesian_bootstrap(std::span<const double> data,
                                        RngState& rng);

/// Multivariate Bayesian bootstrap over n rows of dimension dim.
DiscreteDistribution bayesian_bootstrap_rows(std::size_t dim,
                                             std::span<const double> rows_flat,
                                             RngState& rng);

/// lambda * f_data + (1 - lambda) * f_prior by atom concatenation.
DiscreteDistribution mix(double lambda, const DiscreteDistribution& f_data,
                         const DiscreteDistribution& f_prior);

/// One Beta(n, A) mixing-weight draw.
double draw_mixing_weight(std::size_t n, double total_mass, RngState& rng);

}  // namespace cdp
