#pragma once

#include <Eigen/Core>

#include <optional>
#include <span>
#include <vector>

#include "cdpinfer/discrete.hpp"
#include "cdpinfer/families.hpp"
#include "cdpinfer/rng.hpp"
#include "cdpinfer/samples.hpp"

namespace cdp {

/// Target probabilities 0 < p_1 < ... < p_k < 1 and their increments
/// (p_1, p_2 - p_1, ..., 1 - p_k).
class QuantileSpec {
public:
  explicit QuantileSpec(std::vector<double> probs);

  std::size_t k() const noexcept { return probs_.size(); }
  const std::vector<double>& probs() const noexcept { return probs_; }
  const std::vector<double>& increments() const noexcept { return increments_; }

private:
  std::vector<double> probs_;
  std::vector<double> increments_;
};

/// Independent continuous prior densities per quantile coordinate. A
/// coordinate without a family is an improper flat prior (log density 0).
class ThetaPrior {
public:
  explicit ThetaPrior(std::vector<std::optional<ParametricFamily>> coords);

  static ThetaPrior flat(std::size_t k);
  static ThetaPrior iid(const ParametricFamily& family, std::size_t k);

  std::size_t k() const noexcept { return coords_.size(); }
  bool proper() const;
  double log_pdf(std::span<const double> theta) const;
  const std::optional<ParametricFamily>& coord(std::size_t j) const {
    return coords_[j];
  }

private:
  std::vector<std::optional<ParametricFamily>> coords_;
};

/// Everything needed to evaluate the quantile log-posterior: sorted data,
/// probabilities, DP base measure and prior. Immutable and shareable.
class QuantileTarget {
public:
  QuantileTarget(std::vector<double> data, QuantileSpec spec, BaseMeasure alpha,
                 ThetaPrior prior);

  const std::vector<double>& data() const noexcept { return data_; }
  std::size_t n() const noexcept { return data_.size(); }
  const QuantileSpec& spec() const noexcept { return spec_; }
  const BaseMeasure& alpha() const noexcept { return alpha_; }
  const ThetaPrior& prior() const noexcept { return prior_; }

private:
  std::vector<double> data_;  // sorted
  QuantileSpec spec_;
  BaseMeasure alpha_;
  ThetaPrior prior_;
};

/// Interval data counts n F_n(S_j(theta)) and alpha masses alpha(S_j(theta))
/// for S_1 = (-inf, theta_1], ..., S_{k+1} = (theta_k, inf).
struct IntervalCounts {
  std::vector<std::size_t> counts;
  std::vector<double> alpha_mass;
};

IntervalCounts interval_counts(const QuantileTarget& target,
                               std::span<const double> theta);

/// Marginal likelihood pieces evaluated from counts; shared by the model
/// evaluation path and engineered-measure tests.
double log_cdp_likelihood_from_counts(double total_mass,
                                      const IntervalCounts& ic,
                                      std::span<const double> increments);
double log_jeffreys_likelihood_from_counts(const IntervalCounts& ic,
                                           std::span<const double> increments);

/// log of the cDP marginal likelihood
/// [A]_n / prod_j [alpha(S_j)]_{c_j} * prod_j dp_j^{c_j}.
double log_cdp_likelihood(const QuantileTarget& target,
                          std::span<const double> theta);

/// log of the Jeffreys substitute likelihood
/// Gamma(n) / prod_j c_j! * prod_j dp_j^{c_j}.
double log_jeffreys_likelihood(const QuantileTarget& target,
                               std::span<const double> theta);

/// Unnormalized log posterior: cDP log likelihood plus prior log density.
double log_posterior(const QuantileTarget& target, std::span<const double> theta);

/// Slice-within-Gibbs sampler for the marginal posterior of theta. Keeps
/// iterations - burn_in ordered draws; coordinates move on slice intervals
/// restricted to their neighbors so the ordering is preserved.
WeightedSamples slice_sample(const QuantileTarget& target,
                             const SamplerConfig& config, RngState& rng);

/// Draw F | theta, data: per interval an independent truncated DP draw with
/// parameter (alpha + n F_n) restricted to the interval, scaled by dp_j, so
/// F(S_j) = dp_j exactly.
DiscreteDistribution sample_conditional_F(const QuantileTarget& target,
                                          std::span<const double> theta,
                                          std::size_t truncation, RngState& rng);

/// Large-sample posterior covariance (T' H T)^{-1} of sqrt(n)(theta - q_n),
/// from the true density values f(theta_0) at the population quantiles.
Eigen::MatrixXd asymptotic_covariance(const QuantileSpec& spec,
                                      std::span<const double> density_at_true);

/// Data-driven defaults: Cauchy(median, IQR/2) base with unit mass, and
/// Cauchy(0, 20 * sd(q_hat_p)) coordinate priors where sd(q_hat_p) comes from
/// a 200-replicate nonparametric bootstrap of the sample quantile.
BaseMeasure default_quantile_base(std::span<const double> sorted_data);
ThetaPrior default_quantile_prior(std::span<const double> sorted_data,
                                  const QuantileSpec& spec, RngState& rng);

}  // namespace cdp
