#pragma once

#include <Eigen/Core>

#include <functional>
#include <optional>
#include <vector>

#include "cdpinfer/discrete.hpp"
#include "cdpinfer/families.hpp"
#include "cdpinfer/rng.hpp"
#include "cdpinfer/samples.hpp"

namespace cdp {

/// Responses and a full-column-rank design matrix (one row per observation;
/// prepend an intercept column yourself if wanted).
struct RegressionData {
  Eigen::VectorXd responses;
  Eigen::MatrixXd design;

  RegressionData(Eigen::VectorXd y, Eigen::MatrixXd x);

  Eigen::Index n() const { return responses.size(); }
  Eigen::Index p() const { return design.cols(); }
};

/// Independent location/scale priors on the coefficients (Cauchy by default,
/// Normal also supported).
class BetaPrior {
public:
  explicit BetaPrior(std::vector<ParametricFamily> coords);
  static BetaPrior cauchy(const Eigen::VectorXd& locations,
                          const Eigen::VectorXd& scales);

  std::size_t p() const { return coords_.size(); }
  double log_pdf(const Eigen::VectorXd& beta) const;

private:
  std::vector<ParametricFamily> coords_;
};

/// Elliptical Student-t base measure on (y, x) in R^d: location vector,
/// per-coordinate scales, dof (dof = 1 is the spherical Cauchy).
class MultivariateBaseMeasure {
public:
  MultivariateBaseMeasure(double total_mass, double dof,
                          Eigen::VectorXd location, Eigen::VectorXd scale);

  double total_mass() const { return total_mass_; }
  Eigen::Index dim() const { return location_.size(); }
  Eigen::VectorXd sample(RngState& rng) const;

private:
  double total_mass_;
  double dof_;
  Eigen::VectorXd location_;
  Eigen::VectorXd scale_;
};

/// Coefficients of the weighted least-squares functional
/// beta(F) = (sum_i w_i x_i x_i')^{-1} (sum_i w_i x_i y_i) for atoms (y, x).
/// Solved through a factorization; throws NumericalError when the weighted
/// Gram matrix is singular or has condition number above 1e12.
Eigen::VectorXd weighted_beta(const DiscreteDistribution& f);

struct RegressionHooks {
  std::optional<double> fixed_lambda;
  std::function<double(const Eigen::VectorXd&)> log_prior_override;
};

/// Mirror of the moment sampler with atoms in R^{p+1}: stick-breaking prior
/// draw, Bayesian bootstrap of the (y, x) pairs, Beta(n, A) mixture,
/// weighted-least-squares functional, KDE-estimated prior density weights,
/// then resampling.
WeightedSamples sample_regression_posterior(const RegressionData& data,
                                            const MultivariateBaseMeasure& alpha,
                                            const BetaPrior& prior,
                                            const SamplerConfig& config,
                                            RngState& rng,
                                            const RegressionHooks* hooks = nullptr);

/// Spherical Cauchy base over (y, x), located at the column means with
/// scales ten times the column sds.
MultivariateBaseMeasure default_regression_base(const RegressionData& data,
                                                double total_mass = 1.0);

/// Independent Cauchy(0, 10) priors on each coefficient.
BetaPrior default_beta_prior(Eigen::Index p);

}  // namespace cdp
