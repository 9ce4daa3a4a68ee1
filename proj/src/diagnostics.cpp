#include "cdpinfer/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "cdpinfer/errors.hpp"
#include "cdpinfer/special.hpp"

namespace cdp {

std::vector<double> normalize_log_weights(std::span<const double> log_weights) {
  if (log_weights.empty()) {
    throw NumericalError("normalize_log_weights: empty input");
  }
  double m = -std::numeric_limits<double>::infinity();
  for (double lw : log_weights) {
    if (std::isnan(lw)) throw NumericalError("normalize_log_weights: NaN weight");
    m = std::max(m, lw);
  }
  if (!std::isfinite(m)) {
    throw NumericalError("normalize_log_weights: all weights are zero");
  }
  std::vector<double> w(log_weights.size());
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = std::exp(log_weights[i] - m);
    s += w[i];
  }
  for (double& x : w) x /= s;
  return w;
}

double importance_ess(std::span<const double> log_weights) {
  const auto w = normalize_log_weights(log_weights);
  double ss = 0.0;
  for (double x : w) ss += x * x;
  return 1.0 / ss;
}

std::vector<std::size_t> resample_indices(std::span<const double> weights,
                                          std::size_t n_out, RngState& rng) {
  if (weights.empty()) throw std::invalid_argument("resample_indices: empty weights");
  std::vector<double> cum(weights.size());
  std::partial_sum(weights.begin(), weights.end(), cum.begin());
  const double total = cum.back();
  std::vector<std::size_t> idx(n_out);
  for (std::size_t t = 0; t < n_out; ++t) {
    const double u = rng.uniform01() * total;
    idx[t] = static_cast<std::size_t>(
        std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
  }
  return idx;
}

double weighted_quantile(std::span<const double> values,
                         std::span<const double> weights, double q) {
  if (values.size() != weights.size() || values.empty()) {
    throw std::invalid_argument("weighted_quantile: length mismatch");
  }
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  double cum = 0.0;
  for (std::size_t i : order) {
    cum += weights[i];
    if (cum >= q) return values[i];
  }
  return values[order.back()];
}

SummaryReport summarize(const WeightedSamples& samples, double credible_level) {
  const std::size_t n = samples.n_draws();
  if (n == 0) throw std::invalid_argument("summarize: no draws");
  if (!(credible_level > 0.0 && credible_level < 1.0)) {
    throw std::invalid_argument("summarize: credible level must lie in (0,1)");
  }
  std::vector<double> w;
  if (samples.log_weights) {
    w = normalize_log_weights(*samples.log_weights);
  } else {
    w.assign(n, 1.0 / static_cast<double>(n));
  }
  SummaryReport report;
  report.n_draws = n;
  report.credible_level = credible_level;
  report.ess = samples.ess;
  report.warnings = samples.warnings;
  const double tail = 0.5 * (1.0 - credible_level);
  for (std::size_t j = 0; j < samples.dim; ++j) {
    const auto col = samples.column(j);
    double mean = 0.0;
    for (std::size_t t = 0; t < n; ++t) mean += w[t] * col[t];
    double var = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double d = col[t] - mean;
      var += w[t] * d * d;
    }
    ParameterSummary ps;
    ps.name = j < samples.names.size() ? samples.names[j]
                                       : "theta" + std::to_string(j + 1);
    ps.mean = mean;
    ps.sd = std::sqrt(var);
    ps.ci_lower = weighted_quantile(col, w, tail);
    ps.ci_upper = weighted_quantile(col, w, 1.0 - tail);
    report.parameters.push_back(std::move(ps));
  }
  return report;
}

}  // namespace cdp
