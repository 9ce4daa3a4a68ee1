#include "cdpinfer/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cdpinfer/special.hpp"

namespace cdp {

namespace {

// Rescale so the Kahan sum is 1, then absorb the leftover rounding into the
// largest weight so downstream sum checks see exactly 1.
void normalize_weights(std::vector<double>& w) {
  const double s = stable_sum(w);
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw std::domain_error("weights must have a positive finite sum");
  }
  for (double& x : w) x /= s;
  const double leftover = 1.0 - stable_sum(w);
  auto it = std::max_element(w.begin(), w.end());
  *it += leftover;
}

}  // namespace

DiscreteDistribution::DiscreteDistribution(std::size_t dim,
                                           std::vector<double> atoms_flat,
                                           std::vector<double> weights)
    : dim_(dim), atoms_(std::move(atoms_flat)), weights_(std::move(weights)) {
  if (dim_ == 0) throw std::domain_error("discrete distribution: dim must be >= 1");
  if (weights_.empty()) {
    throw std::domain_error("discrete distribution: needs at least one atom");
  }
  if (atoms_.size() != weights_.size() * dim_) {
    throw std::domain_error("discrete distribution: atom/weight length mismatch");
  }
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::domain_error("discrete distribution: weights must be non-negative");
    }
  }
  if (std::abs(stable_sum(weights_) - 1.0) > 1e-12) {
    throw std::domain_error("discrete distribution: weights must sum to 1");
  }
}

DiscreteDistribution DiscreteDistribution::univariate(
    std::vector<double> atoms, std::vector<double> weights) {
  return {1, std::move(atoms), std::move(weights)};
}

std::size_t default_truncation(double total_mass) {
  if (!(total_mass > 0.0)) {
    throw std::domain_error("default_truncation: total mass must be positive");
  }
  const double log_ratio = std::log(total_mass) - std::log1p(total_mass);
  const double n = std::ceil(std::log(1e-10) / log_ratio);
  if (!(n >= 1.0)) return 1;
  return static_cast<std::size_t>(std::min(n, 1e4));
}

DiscreteDistribution stick_breaking_sample(const BaseMeasure& alpha,
                                           std::size_t truncation,
                                           RngState& rng) {
  if (truncation == 0) {
    throw std::domain_error("stick_breaking_sample: truncation must be >= 1");
  }
  const double total_mass = alpha.total_mass();
  std::vector<double> atoms(truncation + 1);
  std::vector<double> weights(truncation + 1);
  double remaining = 1.0;
  for (std::size_t i = 0; i < truncation; ++i) {
    // Beta(1, A) stick fraction by inverse CDF.
    const double v = 1.0 - std::pow(1.0 - rng.uniform01(), 1.0 / total_mass);
    weights[i] = v * remaining;
    remaining *= (1.0 - v);
    atoms[i] = alpha.base().sample(rng);
  }
  // Residual mass goes to one extra base atom so F is a proper distribution.
  double residual = 1.0 - stable_sum({weights.data(), truncation});
  if (residual < 0.0) residual = 0.0;
  weights[truncation] = residual;
  atoms[truncation] = alpha.base().sample(rng);
  return DiscreteDistribution::univariate(std::move(atoms), std::move(weights));
}

DiscreteDistribution bayesian_bootstrap(std::span<const double> data,
                                        RngState& rng) {
  return bayesian_bootstrap_rows(1, data, rng);
}

DiscreteDistribution bayesian_bootstrap_rows(std::size_t dim,
                                             std::span<const double> rows_flat,
                                             RngState& rng) {
  if (rows_flat.empty() || rows_flat.size() % dim != 0) {
    throw std::domain_error("bayesian_bootstrap: data must be a nonempty multiple of dim");
  }
  const std::size_t n = rows_flat.size() / dim;
  std::vector<double> weights(n);
  for (std::size_t i = 0; i < n; ++i) weights[i] = rng.exponential();
  normalize_weights(weights);
  return {dim, {rows_flat.begin(), rows_flat.end()}, std::move(weights)};
}

DiscreteDistribution mix(double lambda, const DiscreteDistribution& f_data,
                         const DiscreteDistribution& f_prior) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::domain_error("mix: lambda must lie in [0,1]");
  }
  if (f_data.dim() != f_prior.dim()) {
    throw std::domain_error("mix: atom dimensions differ");
  }
  std::vector<double> atoms;
  atoms.reserve((f_data.size() + f_prior.size()) * f_data.dim());
  atoms.insert(atoms.end(), f_data.atoms_flat().begin(), f_data.atoms_flat().end());
  atoms.insert(atoms.end(), f_prior.atoms_flat().begin(), f_prior.atoms_flat().end());
  std::vector<double> weights;
  weights.reserve(f_data.size() + f_prior.size());
  for (double w : f_data.weights()) weights.push_back(lambda * w);
  for (double w : f_prior.weights()) weights.push_back((1.0 - lambda) * w);
  normalize_weights(weights);
  return {f_data.dim(), std::move(atoms), std::move(weights)};
}

double draw_mixing_weight(std::size_t n, double total_mass, RngState& rng) {
  if (n == 0) throw std::domain_error("draw_mixing_weight: n must be >= 1");
  if (!(total_mass > 0.0)) {
    throw std::domain_error("draw_mixing_weight: total mass must be positive");
  }
  double lambda = rng.beta(static_cast<double>(n), total_mass);
  // Keep the draw strictly inside (0,1) for downstream log computations.
  const double eps = 1e-15;
  return std::clamp(lambda, eps, 1.0 - eps);
}

}  // namespace cdp
