#include "cdpinfer/quantile.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "cdpinfer/errors.hpp"
#include "cdpinfer/slice.hpp"
#include "cdpinfer/special.hpp"

namespace cdp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::string quantile_name(double p) {
  std::ostringstream os;
  os << "q" << p;
  return os.str();
}

}  // namespace

QuantileSpec::QuantileSpec(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw std::domain_error("quantile spec: needs at least one probability");
  double prev = 0.0;
  for (double p : probs_) {
    if (!(p > prev && p < 1.0)) {
      throw std::domain_error(
          "quantile spec: probabilities must be strictly increasing in (0,1)");
    }
    prev = p;
  }
  increments_.reserve(probs_.size() + 1);
  increments_.push_back(probs_.front());
  for (std::size_t j = 1; j < probs_.size(); ++j) {
    increments_.push_back(probs_[j] - probs_[j - 1]);
  }
  increments_.push_back(1.0 - probs_.back());
}

ThetaPrior::ThetaPrior(std::vector<std::optional<ParametricFamily>> coords)
    : coords_(std::move(coords)) {
  if (coords_.empty()) throw std::domain_error("theta prior: needs at least one coordinate");
}

ThetaPrior ThetaPrior::flat(std::size_t k) {
  return ThetaPrior(std::vector<std::optional<ParametricFamily>>(k));
}

ThetaPrior ThetaPrior::iid(const ParametricFamily& family, std::size_t k) {
  std::vector<std::optional<ParametricFamily>> coords(k, family);
  return ThetaPrior(std::move(coords));
}

bool ThetaPrior::proper() const {
  return std::all_of(coords_.begin(), coords_.end(),
                     [](const auto& c) { return c.has_value(); });
}

double ThetaPrior::log_pdf(std::span<const double> theta) const {
  if (theta.size() != coords_.size()) {
    throw std::domain_error("theta prior: dimension mismatch");
  }
  double lp = 0.0;
  for (std::size_t j = 0; j < coords_.size(); ++j) {
    if (coords_[j]) lp += coords_[j]->log_pdf(theta[j]);
  }
  return lp;
}

QuantileTarget::QuantileTarget(std::vector<double> data, QuantileSpec spec,
                               BaseMeasure alpha, ThetaPrior prior)
    : data_(std::move(data)),
      spec_(std::move(spec)),
      alpha_(std::move(alpha)),
      prior_(std::move(prior)) {
  std::sort(data_.begin(), data_.end());
  if (prior_.k() != spec_.k()) {
    throw std::domain_error("quantile target: prior dimension must match spec");
  }
  for (double y : data_) {
    if (!std::isfinite(y)) throw std::domain_error("quantile target: non-finite data");
  }
}

IntervalCounts interval_counts(const QuantileTarget& target,
                               std::span<const double> theta) {
  const auto k = target.spec().k();
  if (theta.size() != k) throw std::domain_error("interval_counts: theta dimension mismatch");
  for (std::size_t j = 0; j < k; ++j) {
    if (!std::isfinite(theta[j])) {
      throw std::domain_error("interval_counts: non-finite theta");
    }
    if (j > 0 && !(theta[j] > theta[j - 1])) {
      throw std::domain_error("interval_counts: theta must be strictly increasing");
    }
  }
  const auto& data = target.data();
  IntervalCounts ic;
  ic.counts.resize(k + 1);
  ic.alpha_mass.resize(k + 1);
  // Intervals are left-open / right-closed: data points equal to a boundary
  // fall into the lower interval.
  std::size_t prev_count = 0;
  double prev_cdf = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    const auto upto = static_cast<std::size_t>(
        std::upper_bound(data.begin(), data.end(), theta[j]) - data.begin());
    ic.counts[j] = upto - prev_count;
    prev_count = upto;
    const double cdf_j = target.alpha().base().cdf(theta[j]);
    ic.alpha_mass[j] = target.alpha().total_mass() * std::max(cdf_j - prev_cdf, 0.0);
    prev_cdf = cdf_j;
  }
  ic.counts[k] = data.size() - prev_count;
  ic.alpha_mass[k] = target.alpha().total_mass() * std::max(1.0 - prev_cdf, 0.0);
  return ic;
}

double log_cdp_likelihood_from_counts(double total_mass,
                                      const IntervalCounts& ic,
                                      std::span<const double> increments) {
  std::size_t n = 0;
  for (auto c : ic.counts) n += c;
  double logl = log_rising_factorial(total_mass, static_cast<long long>(n));
  for (std::size_t j = 0; j < ic.counts.size(); ++j) {
    const auto c = ic.counts[j];
    if (c == 0) continue;  // empty product regardless of the interval mass
    if (!(ic.alpha_mass[j] > 0.0)) return kNegInf;  // data where the base has no mass
    logl -= log_rising_factorial(ic.alpha_mass[j], static_cast<long long>(c));
    logl += static_cast<double>(c) * std::log(increments[j]);
  }
  return logl;
}

double log_jeffreys_likelihood_from_counts(const IntervalCounts& ic,
                                           std::span<const double> increments) {
  std::size_t n = 0;
  for (auto c : ic.counts) n += c;
  if (n == 0) throw std::domain_error("jeffreys likelihood: undefined for n = 0");
  double logl = std::lgamma(static_cast<double>(n));
  for (std::size_t j = 0; j < ic.counts.size(); ++j) {
    const auto c = ic.counts[j];
    logl -= std::lgamma(static_cast<double>(c) + 1.0);
    if (c > 0) logl += static_cast<double>(c) * std::log(increments[j]);
  }
  return logl;
}

double log_cdp_likelihood(const QuantileTarget& target,
                          std::span<const double> theta) {
  const auto ic = interval_counts(target, theta);
  return log_cdp_likelihood_from_counts(target.alpha().total_mass(), ic,
                                        target.spec().increments());
}

double log_jeffreys_likelihood(const QuantileTarget& target,
                               std::span<const double> theta) {
  const auto ic = interval_counts(target, theta);
  return log_jeffreys_likelihood_from_counts(ic, target.spec().increments());
}

double log_posterior(const QuantileTarget& target, std::span<const double> theta) {
  const double logl = log_cdp_likelihood(target, theta);
  if (!std::isfinite(logl)) return kNegInf;
  const double logp = target.prior().log_pdf(theta);
  if (!std::isfinite(logp)) return kNegInf;
  return logl + logp;
}

namespace {

// Initial state: sample quantiles, nudged apart where ties would violate the
// strict ordering.
std::vector<double> initial_theta(const QuantileTarget& target, double scale) {
  const auto& spec = target.spec();
  std::vector<double> theta(spec.k());
  for (std::size_t j = 0; j < spec.k(); ++j) {
    theta[j] = empirical_quantile(target.data(), spec.probs()[j]);
  }
  const double eps = std::max(scale, 1e-8) * 1e-6;
  for (std::size_t j = 1; j < theta.size(); ++j) {
    if (theta[j] <= theta[j - 1]) theta[j] = theta[j - 1] + eps;
  }
  return theta;
}

double default_slice_width(const QuantileTarget& target) {
  const auto& data = target.data();
  double width = interquartile_range(data) / 2.0;
  if (!(width > 0.0)) width = (data.back() - data.front()) / 2.0;
  return width;
}

}  // namespace

WeightedSamples slice_sample(const QuantileTarget& target,
                             const SamplerConfig& config, RngState& rng) {
  config.validate();
  if (target.n() == 0) {
    throw std::domain_error("slice_sample: requires at least one observation");
  }
  if (!target.prior().proper()) {
    throw std::domain_error("slice_sample: requires a proper prior");
  }
  const std::size_t k = target.spec().k();
  const double width =
      config.slice_width ? *config.slice_width : default_slice_width(target);
  if (!(width > 0.0) || !std::isfinite(width)) {
    throw std::invalid_argument("slice_sample: non-finite slice width");
  }

  std::vector<double> theta = initial_theta(target, width);
  double log_post = log_posterior(target, theta);
  if (!std::isfinite(log_post)) {
    throw NumericalError("slice_sample: initial state has zero posterior density");
  }

  WeightedSamples out;
  out.dim = k;
  for (double p : target.spec().probs()) out.names.push_back(quantile_name(p));
  const std::size_t kept = config.iterations - config.burn_in;
  out.draws.reserve(kept * k);

  for (std::size_t iter = 0; iter < config.iterations; ++iter) {
    for (std::size_t j = 0; j < k; ++j) {
      SliceOptions opts;
      opts.width = width;
      opts.max_step_out = config.max_doublings;
      if (j > 0) opts.lower = theta[j - 1];
      if (j + 1 < k) opts.upper = theta[j + 1];
      auto coord_log_post = [&](double x) {
        const double old = theta[j];
        theta[j] = x;
        const double lp = log_posterior(target, theta);
        theta[j] = old;
        return lp;
      };
      const auto res =
          slice_update(coord_log_post, theta[j], log_post, opts, rng);
      theta[j] = res.x;
      log_post = res.log_density;
    }
    if (iter >= config.burn_in) {
      out.draws.insert(out.draws.end(), theta.begin(), theta.end());
    }
  }
  out.ess = static_cast<double>(kept);
  return out;
}

DiscreteDistribution sample_conditional_F(const QuantileTarget& target,
                                          std::span<const double> theta,
                                          std::size_t truncation, RngState& rng) {
  if (truncation == 0) {
    throw std::domain_error("sample_conditional_F: truncation must be >= 1");
  }
  const auto ic = interval_counts(target, theta);
  const auto& increments = target.spec().increments();
  const auto& data = target.data();
  const auto& base = target.alpha().base();
  const std::size_t k = target.spec().k();

  std::vector<double> atoms;
  std::vector<double> weights;
  atoms.reserve((truncation + 1) * (k + 1));
  weights.reserve((truncation + 1) * (k + 1));

  std::size_t data_offset = 0;
  for (std::size_t j = 0; j <= k; ++j) {
    const double mass = ic.alpha_mass[j] + static_cast<double>(ic.counts[j]);
    if (!(mass > 0.0)) {
      throw NumericalError("sample_conditional_F: interval " + std::to_string(j) +
                           " has zero total mass");
    }
    const double cdf_lo = j == 0 ? 0.0 : base.cdf(theta[j - 1]);
    const double cdf_hi = j == k ? 1.0 : base.cdf(theta[j]);

    auto draw_atom = [&]() {
      const double u = rng.uniform01() * mass;
      if (u < ic.alpha_mass[j]) {
        // Continuous part: inverse CDF restricted to the interval.
        return base.quantile(cdf_lo + rng.uniform01() * (cdf_hi - cdf_lo));
      }
      return data[data_offset + rng.uniform_below(ic.counts[j])];
    };

    // Independent truncated DP on the interval, scaled to mass dp_j.
    double remaining = 1.0;
    double stick_sum = 0.0;
    for (std::size_t i = 0; i < truncation; ++i) {
      const double v = 1.0 - std::pow(1.0 - rng.uniform01(), 1.0 / mass);
      const double w = v * remaining;
      remaining *= (1.0 - v);
      stick_sum += w;
      atoms.push_back(draw_atom());
      weights.push_back(w * increments[j]);
    }
    double residual = 1.0 - stick_sum;
    if (residual < 0.0) residual = 0.0;
    atoms.push_back(draw_atom());
    weights.push_back(residual * increments[j]);

    data_offset += ic.counts[j];
  }
  return DiscreteDistribution::univariate(std::move(atoms), std::move(weights));
}

Eigen::MatrixXd asymptotic_covariance(const QuantileSpec& spec,
                                      std::span<const double> density_at_true) {
  const auto k = static_cast<Eigen::Index>(spec.k());
  if (density_at_true.size() != spec.k()) {
    throw std::domain_error("asymptotic_covariance: density vector length mismatch");
  }
  for (double f : density_at_true) {
    if (!(f > 0.0)) {
      throw std::domain_error("asymptotic_covariance: densities must be positive");
    }
  }
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    T(j, j) = density_at_true[j];
    if (j > 0) T(j, j - 1) = -density_at_true[j - 1];
  }
  const auto& dp = spec.increments();
  Eigen::MatrixXd H = Eigen::MatrixXd::Constant(k, k, 1.0 / dp.back());
  for (Eigen::Index j = 0; j < k; ++j) H(j, j) += 1.0 / dp[j];
  const Eigen::MatrixXd M = T.transpose() * H * T;
  Eigen::LLT<Eigen::MatrixXd> llt(M);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("asymptotic_covariance: T'HT is not positive definite");
  }
  return llt.solve(Eigen::MatrixXd::Identity(k, k));
}

BaseMeasure default_quantile_base(std::span<const double> sorted_data) {
  if (sorted_data.size() < 4) {
    throw DataError("quantile base: needs at least 4 observations");
  }
  const double med = empirical_quantile(sorted_data, 0.5);
  const double iqr = interquartile_range(sorted_data);
  if (!(iqr > 0.0)) throw DataError("quantile base: data has zero IQR");
  return {1.0, ParametricFamily::cauchy(med, iqr / 2.0)};
}

ThetaPrior default_quantile_prior(std::span<const double> sorted_data,
                                  const QuantileSpec& spec, RngState& rng) {
  const std::size_t n = sorted_data.size();
  if (n < 4) throw DataError("quantile prior: needs at least 4 observations");
  constexpr std::size_t kReplicates = 200;
  std::vector<std::optional<ParametricFamily>> coords;
  coords.reserve(spec.k());
  std::vector<double> resample(n);
  for (std::size_t j = 0; j < spec.k(); ++j) {
    const double p = spec.probs()[j];
    const auto order_index =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(
                                     p * static_cast<double>(n)))) -
        1;
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t r = 0; r < kReplicates; ++r) {
      for (std::size_t i = 0; i < n; ++i) {
        resample[i] = sorted_data[rng.uniform_below(n)];
      }
      std::nth_element(resample.begin(), resample.begin() + order_index,
                       resample.end());
      const double q = resample[order_index];
      sum += q;
      sum_sq += q * q;
    }
    const double mean = sum / kReplicates;
    const double var = std::max(sum_sq / kReplicates - mean * mean, 0.0);
    double tau = 20.0 * std::sqrt(var);
    if (!(tau > 0.0)) tau = std::max(interquartile_range(sorted_data) / 2.0, 1.0);
    coords.emplace_back(ParametricFamily::cauchy(0.0, tau));
  }
  return ThetaPrior(std::move(coords));
}

}  // namespace cdp
