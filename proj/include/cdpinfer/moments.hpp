#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "cdpinfer/discrete.hpp"
#include "cdpinfer/families.hpp"
#include "cdpinfer/kde.hpp"
#include "cdpinfer/rng.hpp"
#include "cdpinfer/samples.hpp"

namespace cdp {

/// Mean, standard deviation, skewness and (non-excess) kurtosis: the target
/// functional g*(F) of the moment model.
struct MomentVector {
  double mu = 0.0;
  double sigma = 0.0;
  double gamma = 0.0;  // standardized third central moment
  double kappa = 0.0;  // standardized fourth central moment, normal -> 3

  std::array<double, 4> as_array() const { return {mu, sigma, gamma, kappa}; }
};

/// Exact weighted moments of a univariate discrete distribution.
/// Throws NumericalError when the weighted variance is degenerate.
MomentVector g_star_moments(const DiscreteDistribution& f);

/// Independent priors on (mu, sigma, gamma, kappa):
/// Cauchy, Gamma, Cauchy, Gamma.
class MomentPrior {
public:
  MomentPrior(ParametricFamily mu_prior, ParametricFamily sigma_prior,
              ParametricFamily gamma_prior, ParametricFamily kappa_prior);

  double log_pdf(const MomentVector& theta) const;

  const ParametricFamily& mu_prior() const { return mu_; }
  const ParametricFamily& sigma_prior() const { return sigma_; }
  const ParametricFamily& gamma_prior() const { return gamma_; }
  const ParametricFamily& kappa_prior() const { return kappa_; }

private:
  ParametricFamily mu_, sigma_, gamma_, kappa_;
};

/// Simulation-based estimate of the prior predictive density h(theta; alpha)
/// of g*(F) under F ~ D_alpha: a 4-d product-Gaussian KDE over prior draws.
class PriorDensityEstimate {
public:
  PriorDensityEstimate(ProductKde kde, std::size_t degenerate_skipped);

  double log_density(const MomentVector& theta) const;
  const ProductKde& kde() const { return kde_; }
  std::size_t n_draws() const { return kde_.size(); }
  std::size_t degenerate_skipped() const { return degenerate_skipped_; }
  std::size_t floored_evaluations() const { return kde_.floored_evaluations(); }

private:
  ProductKde kde_;
  std::size_t degenerate_skipped_;
};

PriorDensityEstimate estimate_prior_density(const BaseMeasure& alpha,
                                            std::size_t n_draws,
                                            std::size_t truncation,
                                            RngState& rng);

/// Test hooks for the moment sampler.
struct MomentHooks {
  std::optional<double> fixed_lambda;
  std::function<double(const MomentVector&)> log_prior_override;
  const PriorDensityEstimate* prior_density = nullptr;  // reuse instead of fitting
};

/// Importance-reweighted posterior sampling: per draw, a stick-breaking prior
/// draw and a Bayesian-bootstrap draw are mixed with a Beta(n, A) weight, the
/// moment functional is evaluated, and draws are reweighted by
/// pi(theta) / h_hat(theta; alpha) and resampled.
WeightedSamples sample_moment_posterior(std::span<const double> data,
                                        const BaseMeasure& alpha,
                                        const MomentPrior& prior,
                                        const SamplerConfig& config,
                                        RngState& rng,
                                        const MomentHooks* hooks = nullptr);

/// The A -> 0 limit: unweighted Bayesian-bootstrap draws of g*(F).
WeightedSamples sample_bayesian_bootstrap_posterior(std::span<const double> data,
                                                    std::size_t n_samples,
                                                    RngState& rng);

/// Data-driven defaults: Student-t5(median, IQR/1.454) base with unit mass
/// and weakly informative moment priors centered on the sample estimates.
std::pair<BaseMeasure, MomentPrior> default_moment_priors(
    std::span<const double> data);

}  // namespace cdp
