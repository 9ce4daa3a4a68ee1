#include "cdpinfer/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cdp {

double log_rising_factorial(double a, long long k) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw std::domain_error("log_rising_factorial: a must be positive and finite");
  }
  if (k < 0) {
    throw std::domain_error("log_rising_factorial: k must be non-negative");
  }
  if (k == 0) return 0.0;
  return std::lgamma(a + static_cast<double>(k)) - std::lgamma(a);
}

double log_dirichlet_density(std::span<const double> x,
                             std::span<const double> params) {
  if (x.size() != params.size() || x.empty()) {
    throw std::domain_error("log_dirichlet_density: length mismatch");
  }
  double param_sum = 0.0;
  for (double a : params) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw std::domain_error("log_dirichlet_density: parameters must be positive");
    }
    param_sum += a;
  }
  double coord_sum = 0.0;
  for (double xi : x) coord_sum += xi;
  if (std::abs(coord_sum - 1.0) > 1e-9) {
    throw std::domain_error("log_dirichlet_density: point not on the simplex");
  }
  for (double xi : x) {
    if (xi <= 0.0) return -std::numeric_limits<double>::infinity();
  }
  double logp = std::lgamma(param_sum);
  for (std::size_t i = 0; i < x.size(); ++i) {
    logp += (params[i] - 1.0) * std::log(x[i]) - std::lgamma(params[i]);
  }
  return logp;
}

double log_sum_exp(std::span<const double> v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

double stable_sum(std::span<const double> v) {
  double s = 0.0, c = 0.0;
  for (double x : v) {
    double y = x - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

double empirical_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw std::domain_error("empirical_quantile: empty data");
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("empirical_quantile: p must be in (0,1)");
  }
  const auto n = static_cast<double>(sorted.size());
  auto idx = static_cast<std::size_t>(std::ceil(p * n));
  if (idx == 0) idx = 1;
  if (idx > sorted.size()) idx = sorted.size();
  return sorted[idx - 1];
}

double interquartile_range(std::span<const double> sorted) {
  return empirical_quantile(sorted, 0.75) - empirical_quantile(sorted, 0.25);
}

}  // namespace cdp
