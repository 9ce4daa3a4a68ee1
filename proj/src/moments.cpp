#include "cdpinfer/moments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cdpinfer/errors.hpp"
#include "cdpinfer/diagnostics.hpp"
#include "cdpinfer/parallel.hpp"
#include "cdpinfer/special.hpp"

namespace cdp {

namespace {

const std::vector<std::string> kMomentNames = {"mu", "sigma", "gamma", "kappa"};

std::size_t distinct_count(std::vector<double> sorted) {
  std::sort(sorted.begin(), sorted.end());
  return static_cast<std::size_t>(
      std::unique(sorted.begin(), sorted.end()) - sorted.begin());
}

void require_two_distinct(std::span<const double> data, const char* who) {
  if (data.size() < 2 ||
      distinct_count({data.begin(), data.end()}) < 2) {
    throw DataError(std::string(who) + ": needs at least two distinct observations");
  }
}

}  // namespace

MomentVector g_star_moments(const DiscreteDistribution& f) {
  if (f.dim() != 1) throw std::domain_error("g_star_moments: univariate atoms required");
  const auto& w = f.weights();
  double mu = 0.0, msq = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    mu += w[i] * f.atom1d(i);
    msq += w[i] * f.atom1d(i) * f.atom1d(i);
  }
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double d = f.atom1d(i) - mu;
    const double d2 = d * d;
    m2 += w[i] * d2;
    m3 += w[i] * d2 * d;
    m4 += w[i] * d2 * d2;
  }
  if (!(m2 > 0.0) || m2 <= 1e-12 * msq) {
    throw NumericalError("g_star_moments: degenerate distribution (near-zero variance)");
  }
  MomentVector theta;
  theta.mu = mu;
  theta.sigma = std::sqrt(m2);
  theta.gamma = m3 / (m2 * theta.sigma);
  theta.kappa = m4 / (m2 * m2);
  if (theta.kappa < 1.0 + theta.gamma * theta.gamma - 1e-9) {
    throw NumericalError("g_star_moments: moment inequality violated");
  }
  return theta;
}

MomentPrior::MomentPrior(ParametricFamily mu_prior, ParametricFamily sigma_prior,
                         ParametricFamily gamma_prior, ParametricFamily kappa_prior)
    : mu_(std::move(mu_prior)),
      sigma_(std::move(sigma_prior)),
      gamma_(std::move(gamma_prior)),
      kappa_(std::move(kappa_prior)) {
  if (mu_.kind() != FamilyKind::Cauchy || gamma_.kind() != FamilyKind::Cauchy ||
      sigma_.kind() != FamilyKind::Gamma || kappa_.kind() != FamilyKind::Gamma) {
    throw std::domain_error(
        "moment prior: expects Cauchy priors on mu/gamma and Gamma priors on sigma/kappa");
  }
}

double MomentPrior::log_pdf(const MomentVector& theta) const {
  return mu_.log_pdf(theta.mu) + sigma_.log_pdf(theta.sigma) +
         gamma_.log_pdf(theta.gamma) + kappa_.log_pdf(theta.kappa);
}

PriorDensityEstimate::PriorDensityEstimate(ProductKde kde,
                                           std::size_t degenerate_skipped)
    : kde_(std::move(kde)), degenerate_skipped_(degenerate_skipped) {
  if (kde_.dim() != 4) {
    throw std::invalid_argument("prior density estimate: expects 4-d draws");
  }
}

double PriorDensityEstimate::log_density(const MomentVector& theta) const {
  const auto x = theta.as_array();
  return kde_.log_density({x.data(), x.size()});
}

PriorDensityEstimate estimate_prior_density(const BaseMeasure& alpha,
                                            std::size_t n_draws,
                                            std::size_t truncation,
                                            RngState& rng) {
  if (n_draws < 500) {
    throw std::domain_error("estimate_prior_density: needs at least 500 draws");
  }
  std::vector<double> points;
  points.reserve(n_draws * 4);
  std::size_t skipped = 0;
  for (std::size_t i = 0; i < n_draws; ++i) {
    RngState sub = rng.split(i);
    const auto f = stick_breaking_sample(alpha, truncation, sub);
    try {
      const auto theta = g_star_moments(f);
      points.push_back(theta.mu);
      points.push_back(theta.sigma);
      points.push_back(theta.gamma);
      points.push_back(theta.kappa);
    } catch (const NumericalError&) {
      ++skipped;
    }
  }
  if (points.size() / 4 < 100) {
    throw NumericalError(
        "estimate_prior_density: fewer than 100 non-degenerate prior draws");
  }
  return {ProductKde(4, std::move(points)), skipped};
}

WeightedSamples sample_moment_posterior(std::span<const double> data,
                                        const BaseMeasure& alpha,
                                        const MomentPrior& prior,
                                        const SamplerConfig& config,
                                        RngState& rng,
                                        const MomentHooks* hooks) {
  config.validate();
  require_two_distinct(data, "sample_moment_posterior");
  const std::size_t n = data.size();
  const std::size_t n_samples = config.iterations;
  const std::size_t truncation =
      config.truncation ? *config.truncation
                        : default_truncation(alpha.total_mass());

  const PriorDensityEstimate* density = hooks ? hooks->prior_density : nullptr;
  std::optional<PriorDensityEstimate> owned_density;
  if (density == nullptr) {
    RngState kde_rng = rng.split(0x70726972ULL);  // dedicated substream
    owned_density.emplace(
        estimate_prior_density(alpha, config.prior_draws, truncation, kde_rng));
    density = &*owned_density;
  }
  const auto log_prior = [&](const MomentVector& theta) {
    if (hooks && hooks->log_prior_override) return hooks->log_prior_override(theta);
    return prior.log_pdf(theta);
  };

  std::vector<double> thetas(n_samples * 4);
  std::vector<double> log_weights(n_samples);
  parallel_for(n_samples, config.threads, [&](std::size_t t) {
    RngState sub = rng.split(t);
    for (int attempt = 0;; ++attempt) {
      if (attempt >= 100) {
        throw NumericalError("sample_moment_posterior: all mixture draws degenerate");
      }
      const auto f_prior = stick_breaking_sample(alpha, truncation, sub);
      const auto f_data = bayesian_bootstrap(data, sub);
      const double lambda = hooks && hooks->fixed_lambda
                                ? *hooks->fixed_lambda
                                : draw_mixing_weight(n, alpha.total_mass(), sub);
      const auto f = mix(lambda, f_data, f_prior);
      try {
        const auto theta = g_star_moments(f);
        thetas[t * 4 + 0] = theta.mu;
        thetas[t * 4 + 1] = theta.sigma;
        thetas[t * 4 + 2] = theta.gamma;
        thetas[t * 4 + 3] = theta.kappa;
        log_weights[t] = log_prior(theta) - density->log_density(theta);
        return;
      } catch (const NumericalError&) {
        continue;
      }
    }
  });

  const auto weights = normalize_log_weights(log_weights);
  const double ess = importance_ess(log_weights);

  WeightedSamples out;
  out.names = kMomentNames;
  out.dim = 4;
  out.ess = ess;
  if (ess < config.min_ess) {
    out.warnings.push_back("low importance ESS: " + std::to_string(ess) +
                           " < " + std::to_string(config.min_ess));
  }
  if (density->floored_evaluations() > 0) {
    out.warnings.push_back(
        "prior density evaluations floored at 1e-300: " +
        std::to_string(density->floored_evaluations()) + " draw(s)");
  }
  RngState resample_rng = rng.split(0x72657331ULL);
  const auto idx = resample_indices(weights, n_samples, resample_rng);
  out.draws.resize(n_samples * 4);
  for (std::size_t t = 0; t < n_samples; ++t) {
    for (std::size_t j = 0; j < 4; ++j) out.draws[t * 4 + j] = thetas[idx[t] * 4 + j];
  }
  return out;
}

WeightedSamples sample_bayesian_bootstrap_posterior(std::span<const double> data,
                                                    std::size_t n_samples,
                                                    RngState& rng) {
  if (n_samples == 0) {
    throw std::domain_error("sample_bayesian_bootstrap_posterior: needs n_samples >= 1");
  }
  require_two_distinct(data, "sample_bayesian_bootstrap_posterior");
  WeightedSamples out;
  out.names = kMomentNames;
  out.dim = 4;
  out.draws.resize(n_samples * 4);
  for (std::size_t t = 0; t < n_samples; ++t) {
    RngState sub = rng.split(t);
    for (int attempt = 0;; ++attempt) {
      if (attempt >= 100) {
        throw NumericalError("sample_bayesian_bootstrap_posterior: degenerate draws");
      }
      try {
        const auto theta = g_star_moments(bayesian_bootstrap(data, sub));
        out.draws[t * 4 + 0] = theta.mu;
        out.draws[t * 4 + 1] = theta.sigma;
        out.draws[t * 4 + 2] = theta.gamma;
        out.draws[t * 4 + 3] = theta.kappa;
        break;
      } catch (const NumericalError&) {
        continue;
      }
    }
  }
  out.ess = static_cast<double>(n_samples);
  return out;
}

std::pair<BaseMeasure, MomentPrior> default_moment_priors(
    std::span<const double> data) {
  if (data.size() < 4) throw DataError("moment priors: needs at least 4 observations");
  std::vector<double> sorted(data.begin(), data.end());
  std::sort(sorted.begin(), sorted.end());
  const double med = empirical_quantile(sorted, 0.5);
  const double iqr = interquartile_range(sorted);
  if (!(iqr > 0.0)) throw DataError("moment priors: data has zero IQR");

  const double n = static_cast<double>(data.size());
  double mean = 0.0;
  for (double y : data) mean += y;
  mean /= n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double y : data) {
    const double d = y - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  const double sd = std::sqrt(m2 * n / (n - 1.0));
  const double kurt = m4 / (m2 * m2);
  if (!(sd > 0.0)) throw DataError("moment priors: constant data");

  BaseMeasure base(1.0, ParametricFamily::student_t(5.0, med, iqr / 1.454));
  // Gamma priors with mean at the sample estimate and sd ten times the mean:
  // shape 0.01, rate 0.01 / estimate.
  MomentPrior prior(ParametricFamily::cauchy(med, 10.0 * iqr),
                    ParametricFamily::gamma(0.01, 0.01 / sd),
                    ParametricFamily::cauchy(0.0, 10.0),
                    ParametricFamily::gamma(0.01, 0.01 / kurt));
  return {std::move(base), std::move(prior)};
}

}  // namespace cdp
