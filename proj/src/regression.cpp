#include "cdpinfer/regression.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <stdexcept>

#include "cdpinfer/diagnostics.hpp"
#include "cdpinfer/errors.hpp"
#include "cdpinfer/kde.hpp"
#include "cdpinfer/parallel.hpp"

namespace cdp {

RegressionData::RegressionData(Eigen::VectorXd y, Eigen::MatrixXd x)
    : responses(std::move(y)), design(std::move(x)) {
  if (responses.size() != design.rows()) {
    throw DataError("regression data: response/design row mismatch");
  }
  if (design.rows() <= design.cols() || design.cols() == 0) {
    throw DataError("regression data: needs n > p >= 1");
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(design);
  const auto& sv = svd.singularValues();
  if (!(sv(sv.size() - 1) > 1e-10 * sv(0))) {
    throw DataError("regression data: design matrix is rank deficient");
  }
}

BetaPrior::BetaPrior(std::vector<ParametricFamily> coords)
    : coords_(std::move(coords)) {
  if (coords_.empty()) throw std::domain_error("beta prior: needs >= 1 coordinate");
  for (const auto& c : coords_) {
    if (c.kind() != FamilyKind::Cauchy && c.kind() != FamilyKind::Normal) {
      throw std::domain_error("beta prior: coordinates must be Cauchy or Normal");
    }
  }
}

BetaPrior BetaPrior::cauchy(const Eigen::VectorXd& locations,
                            const Eigen::VectorXd& scales) {
  if (locations.size() != scales.size()) {
    throw std::domain_error("beta prior: location/scale length mismatch");
  }
  std::vector<ParametricFamily> coords;
  coords.reserve(locations.size());
  for (Eigen::Index j = 0; j < locations.size(); ++j) {
    coords.push_back(ParametricFamily::cauchy(locations(j), scales(j)));
  }
  return BetaPrior(std::move(coords));
}

double BetaPrior::log_pdf(const Eigen::VectorXd& beta) const {
  if (static_cast<std::size_t>(beta.size()) != coords_.size()) {
    throw std::domain_error("beta prior: dimension mismatch");
  }
  double lp = 0.0;
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    lp += coords_[static_cast<std::size_t>(j)].log_pdf(beta(j));
  }
  return lp;
}

MultivariateBaseMeasure::MultivariateBaseMeasure(double total_mass, double dof,
                                                 Eigen::VectorXd location,
                                                 Eigen::VectorXd scale)
    : total_mass_(total_mass),
      dof_(dof),
      location_(std::move(location)),
      scale_(std::move(scale)) {
  if (!(total_mass_ > 0.0)) {
    throw std::domain_error("multivariate base: total mass must be positive");
  }
  if (!(dof_ > 0.0)) throw std::domain_error("multivariate base: dof must be positive");
  if (location_.size() != scale_.size() || location_.size() == 0) {
    throw std::domain_error("multivariate base: location/scale mismatch");
  }
  if (!(scale_.minCoeff() > 0.0)) {
    throw std::domain_error("multivariate base: scales must be positive");
  }
}

Eigen::VectorXd MultivariateBaseMeasure::sample(RngState& rng) const {
  // Elliptical t draw: correlated-free normal scaled by a chi-square mixing
  // variable; dof = 1 gives the spherical Cauchy.
  Eigen::VectorXd z(dim());
  for (Eigen::Index j = 0; j < dim(); ++j) z(j) = rng.normal();
  double chisq = 0.0;
  const auto whole = static_cast<std::size_t>(dof_);
  for (std::size_t i = 0; i < whole; ++i) {
    const double g = rng.normal();
    chisq += g * g;
  }
  const double frac = dof_ - static_cast<double>(whole);
  if (frac > 0.0) {
    // Fractional dof via a Gamma(frac/2, scale 2) increment (inverse CDF).
    chisq += 2.0 * boost::math::gamma_p_inv(0.5 * frac, rng.uniform01());
  }
  const double mix = std::sqrt(dof_ / chisq);
  return location_.array() + scale_.array() * z.array() * mix;
}

Eigen::VectorXd weighted_beta(const DiscreteDistribution& f) {
  if (f.dim() < 2) {
    throw std::domain_error("weighted_beta: atoms must be (y, x) with p >= 1");
  }
  const auto p = static_cast<Eigen::Index>(f.dim() - 1);
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(p, p);
  Eigen::VectorXd moment = Eigen::VectorXd::Zero(p);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto a = f.atom(i);
    const double w = f.weight(i);
    if (w == 0.0) continue;
    const Eigen::Map<const Eigen::VectorXd> x(a.data() + 1, p);
    gram.selfadjointView<Eigen::Lower>().rankUpdate(x, w);
    moment += (w * a[0]) * x;
  }
  gram = gram.selfadjointView<Eigen::Lower>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  if (eig.info() != Eigen::Success) {
    throw NumericalError("weighted_beta: eigendecomposition failed");
  }
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo >= 1e12) {
    throw NumericalError("weighted_beta: singular or ill-conditioned Gram matrix");
  }
  return gram.ldlt().solve(moment);
}

WeightedSamples sample_regression_posterior(const RegressionData& data,
                                            const MultivariateBaseMeasure& alpha,
                                            const BetaPrior& prior,
                                            const SamplerConfig& config,
                                            RngState& rng,
                                            const RegressionHooks* hooks) {
  config.validate();
  const auto n = static_cast<std::size_t>(data.n());
  const auto p = data.p();
  const auto d = static_cast<std::size_t>(p) + 1;
  if (alpha.dim() != static_cast<Eigen::Index>(d)) {
    throw std::domain_error("sample_regression_posterior: base dimension must be p + 1");
  }
  if (prior.p() != static_cast<std::size_t>(p)) {
    throw std::domain_error("sample_regression_posterior: prior dimension must be p");
  }
  const std::size_t n_samples = config.iterations;
  const std::size_t truncation =
      config.truncation ? *config.truncation
                        : default_truncation(alpha.total_mass());

  // Rows (y_i, x_i) as flat atoms for the bootstrap.
  std::vector<double> rows(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    rows[i * d] = data.responses(static_cast<Eigen::Index>(i));
    for (Eigen::Index j = 0; j < p; ++j) {
      rows[i * d + 1 + static_cast<std::size_t>(j)] =
          data.design(static_cast<Eigen::Index>(i), j);
    }
  }

  auto stick_breaking_rows = [&](RngState& sub) {
    std::vector<double> atoms((truncation + 1) * d);
    std::vector<double> weights(truncation + 1);
    double remaining = 1.0;
    double stick_sum = 0.0;
    for (std::size_t i = 0; i < truncation; ++i) {
      const double v =
          1.0 - std::pow(1.0 - sub.uniform01(), 1.0 / alpha.total_mass());
      weights[i] = v * remaining;
      remaining *= (1.0 - v);
      stick_sum += weights[i];
      const auto atom = alpha.sample(sub);
      for (std::size_t j = 0; j < d; ++j) atoms[i * d + j] = atom(static_cast<Eigen::Index>(j));
    }
    weights[truncation] = std::max(1.0 - stick_sum, 0.0);
    const auto atom = alpha.sample(sub);
    for (std::size_t j = 0; j < d; ++j) {
      atoms[truncation * d + j] = atom(static_cast<Eigen::Index>(j));
    }
    return DiscreteDistribution(d, std::move(atoms), std::move(weights));
  };

  // Prior predictive density of beta(F) under F ~ D_alpha, by simulation.
  std::vector<double> prior_points;
  {
    RngState kde_rng = rng.split(0x70726972ULL);
    prior_points.reserve(config.prior_draws * static_cast<std::size_t>(p));
    std::size_t failures = 0;
    for (std::size_t i = 0; i < config.prior_draws; ++i) {
      RngState sub = kde_rng.split(i);
      try {
        const auto f = stick_breaking_rows(sub);
        const Eigen::VectorXd beta = weighted_beta(f);
        for (Eigen::Index j = 0; j < p; ++j) prior_points.push_back(beta(j));
      } catch (const NumericalError&) {
        ++failures;
      }
    }
    if (prior_points.size() / static_cast<std::size_t>(p) < 100) {
      throw NumericalError(
          "sample_regression_posterior: too few non-singular prior draws");
    }
  }
  const ProductKde density(static_cast<std::size_t>(p), std::move(prior_points));

  std::vector<double> betas(n_samples * static_cast<std::size_t>(p));
  std::vector<double> log_weights(n_samples);
  parallel_for(n_samples, config.threads, [&](std::size_t t) {
    RngState sub = rng.split(t);
    for (int attempt = 0;; ++attempt) {
      if (attempt >= 100) {
        throw NumericalError(
            "sample_regression_posterior: repeated Gram singularity");
      }
      const auto f_prior = stick_breaking_rows(sub);
      const auto f_data = bayesian_bootstrap_rows(d, rows, sub);
      const double lambda =
          hooks && hooks->fixed_lambda
              ? *hooks->fixed_lambda
              : draw_mixing_weight(n, alpha.total_mass(), sub);
      const auto f = mix(lambda, f_data, f_prior);
      try {
        const Eigen::VectorXd beta = weighted_beta(f);
        for (Eigen::Index j = 0; j < p; ++j) {
          betas[t * static_cast<std::size_t>(p) + static_cast<std::size_t>(j)] =
              beta(j);
        }
        const double lp = hooks && hooks->log_prior_override
                              ? hooks->log_prior_override(beta)
                              : prior.log_pdf(beta);
        log_weights[t] =
            lp - density.log_density(
                     {betas.data() + t * static_cast<std::size_t>(p),
                      static_cast<std::size_t>(p)});
        return;
      } catch (const NumericalError&) {
        continue;
      }
    }
  });

  const auto weights = normalize_log_weights(log_weights);
  const double ess = importance_ess(log_weights);

  WeightedSamples out;
  out.dim = static_cast<std::size_t>(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    out.names.push_back("beta" + std::to_string(j + 1));
  }
  out.ess = ess;
  if (ess < config.min_ess) {
    out.warnings.push_back("low importance ESS: " + std::to_string(ess) +
                           " < " + std::to_string(config.min_ess));
  }
  if (density.floored_evaluations() > 0) {
    out.warnings.push_back(
        "prior density evaluations floored at 1e-300: " +
        std::to_string(density.floored_evaluations()) + " draw(s)");
  }
  RngState resample_rng = rng.split(0x72657331ULL);
  const auto idx = resample_indices(weights, n_samples, resample_rng);
  out.draws.resize(n_samples * static_cast<std::size_t>(p));
  for (std::size_t t = 0; t < n_samples; ++t) {
    for (Eigen::Index j = 0; j < p; ++j) {
      out.draws[t * static_cast<std::size_t>(p) + static_cast<std::size_t>(j)] =
          betas[idx[t] * static_cast<std::size_t>(p) + static_cast<std::size_t>(j)];
    }
  }
  return out;
}

MultivariateBaseMeasure default_regression_base(const RegressionData& data,
                                                double total_mass) {
  const auto d = data.p() + 1;
  Eigen::VectorXd location(d), scale(d);
  auto column_stats = [&](const Eigen::VectorXd& col, Eigen::Index j) {
    const double mean = col.mean();
    const double sd = std::sqrt((col.array() - mean).square().sum() /
                                static_cast<double>(col.size() - 1));
    if (!(sd > 0.0)) {
      throw DataError("regression base: column " + std::to_string(j) +
                      " is constant");
    }
    location(j) = mean;
    scale(j) = 10.0 * sd;
  };
  column_stats(data.responses, 0);
  for (Eigen::Index j = 0; j < data.p(); ++j) {
    column_stats(data.design.col(j), j + 1);
  }
  return {total_mass, 1.0, std::move(location), std::move(scale)};
}

BetaPrior default_beta_prior(Eigen::Index p) {
  return BetaPrior::cauchy(Eigen::VectorXd::Zero(p),
                           Eigen::VectorXd::Constant(p, 10.0));
}

}  // namespace cdp
