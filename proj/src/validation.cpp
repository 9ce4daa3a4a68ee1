#include "cdpinfer/validation.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cdpinfer/errors.hpp"
#include "cdpinfer/special.hpp"

namespace cdp {

namespace {

using nlohmann::json;

// Normalize exp(log_values) to integrate to 1 over the grid (trapezoid rule).
std::vector<double> normalized_density(const std::vector<double>& log_values,
                                       std::span<const double> grid) {
  double m = -std::numeric_limits<double>::infinity();
  for (double lv : log_values) m = std::max(m, lv);
  if (!std::isfinite(m)) {
    throw NumericalError("normalized_density: all grid values have zero mass");
  }
  std::vector<double> dens(log_values.size());
  for (std::size_t i = 0; i < dens.size(); ++i) dens[i] = std::exp(log_values[i] - m);
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    integral += 0.5 * (dens[i] + dens[i + 1]) * (grid[i + 1] - grid[i]);
  }
  if (!(integral > 0.0)) throw NumericalError("normalized_density: zero integral");
  for (double& d : dens) d /= integral;
  return dens;
}

}  // namespace

std::vector<double> default_theta_grid(std::span<const double> data,
                                       std::size_t points) {
  if (data.size() < 4 || points < 2) {
    throw std::invalid_argument("default_theta_grid: needs >= 4 data points and >= 2 grid points");
  }
  std::vector<double> sorted(data.begin(), data.end());
  std::sort(sorted.begin(), sorted.end());
  const double iqr = interquartile_range(sorted);
  const double lo = sorted.front() - 3.0 * iqr;
  const double hi = sorted.back() + 3.0 * iqr;
  const double step = (hi - lo) / static_cast<double>(points - 1);
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) {
    double x = lo + step * static_cast<double>(i);
    // keep grid points off exact data values
    while (std::binary_search(sorted.begin(), sorted.end(), x)) {
      x += step * 1e-6;
    }
    grid[i] = x;
  }
  return grid;
}

JeffreysLimitReport validate_jeffreys_limit(std::span<const double> data,
                                            const QuantileSpec& spec,
                                            std::span<const double> mass_grid,
                                            std::span<const double> theta_grid,
                                            const ThetaPrior& prior) {
  if (spec.k() != 1) {
    throw std::invalid_argument("validate_jeffreys_limit: supports k = 1");
  }
  if (theta_grid.size() < 2) {
    throw std::invalid_argument("validate_jeffreys_limit: grid too small");
  }
  std::vector<double> sorted(data.begin(), data.end());
  std::sort(sorted.begin(), sorted.end());

  JeffreysLimitReport report;
  report.grid_points = theta_grid.size();
  report.n = data.size();

  // Jeffreys x prior over the grid does not depend on the total mass.
  std::vector<double> log_jeffreys(theta_grid.size());
  {
    BaseMeasure alpha(1.0, ParametricFamily::empirical(sorted));
    QuantileTarget target(sorted, spec, alpha, prior);
    for (std::size_t i = 0; i < theta_grid.size(); ++i) {
      const double th = theta_grid[i];
      log_jeffreys[i] = log_jeffreys_likelihood(target, {&th, 1}) +
                        prior.log_pdf({&th, 1});
    }
  }
  const auto jeffreys_density = normalized_density(log_jeffreys, theta_grid);

  for (double total_mass : mass_grid) {
    BaseMeasure alpha(total_mass, ParametricFamily::empirical(sorted));
    QuantileTarget target(sorted, spec, alpha, prior);
    std::vector<double> log_post(theta_grid.size());
    for (std::size_t i = 0; i < theta_grid.size(); ++i) {
      const double th = theta_grid[i];
      log_post[i] = log_posterior(target, {&th, 1});
    }
    const auto post_density = normalized_density(log_post, theta_grid);
    double sup = 0.0;
    for (std::size_t i = 0; i < theta_grid.size(); ++i) {
      sup = std::max(sup, std::abs(post_density[i] - jeffreys_density[i]));
    }
    report.total_mass_grid.push_back(total_mass);
    report.sup_discrepancy.push_back(sup);
  }
  return report;
}

bool NormalityReport::errors_decreasing() const {
  std::size_t inversions = 0;
  for (std::size_t i = 0; i + 1 < entries.size(); ++i) {
    if (entries[i + 1].rel_frobenius_error > entries[i].rel_frobenius_error) {
      ++inversions;
    }
  }
  return inversions <= 1;
}

NormalityReport validate_asymptotic_normality(const ParametricFamily& dist,
                                              const QuantileSpec& spec,
                                              std::span<const std::size_t> n_grid,
                                              std::size_t replicates,
                                              const SamplerConfig& config,
                                              RngState& rng) {
  if (replicates == 0) {
    throw std::invalid_argument("validate_asymptotic_normality: replicates >= 1");
  }
  const auto k = static_cast<Eigen::Index>(spec.k());

  // Analytic covariance from the true density at the population quantiles.
  std::vector<double> density_at_true(spec.k());
  for (std::size_t j = 0; j < spec.k(); ++j) {
    const double q = dist.quantile(spec.probs()[j]);
    density_at_true[j] = std::exp(dist.log_pdf(q));
  }
  const Eigen::MatrixXd sigma = asymptotic_covariance(
      spec, density_at_true);

  NormalityReport report;
  for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
    const std::size_t n = n_grid[gi];
    RngState data_rng = rng.split(1000 + gi);
    std::vector<double> data(n);
    for (auto& y : data) y = dist.sample(data_rng);
    std::sort(data.begin(), data.end());

    RngState prior_rng = rng.split(2000 + gi);
    QuantileTarget target(data, spec, default_quantile_base(data),
                          default_quantile_prior(data, spec, prior_rng));

    std::vector<double> q_n(spec.k());
    for (std::size_t j = 0; j < spec.k(); ++j) {
      q_n[j] = empirical_quantile(data, spec.probs()[j]);
    }

    // Pool scaled draws over independent chains.
    const double root_n = std::sqrt(static_cast<double>(n));
    std::vector<double> scaled;
    for (std::size_t r = 0; r < replicates; ++r) {
      RngState chain_rng = rng.split(3000 + gi * 131 + r);
      const auto chain = slice_sample(target, config, chain_rng);
      for (std::size_t t = 0; t < chain.n_draws(); ++t) {
        const auto row = chain.row(t);
        for (std::size_t j = 0; j < spec.k(); ++j) {
          scaled.push_back(root_n * (row[j] - q_n[j]));
        }
      }
    }
    const auto m = static_cast<Eigen::Index>(scaled.size() / spec.k());
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                   Eigen::RowMajor>>
        draws(scaled.data(), m, k);
    const Eigen::RowVectorXd mean = draws.colwise().mean();
    const Eigen::MatrixXd centered = draws.rowwise() - mean;
    const Eigen::MatrixXd cov =
        centered.transpose() * centered / static_cast<double>(m - 1);

    NormalityEntry entry;
    entry.n = n;
    entry.empirical_cov = cov;
    entry.asymptotic_cov = sigma;
    entry.rel_frobenius_error = (cov - sigma).norm() / sigma.norm();
    report.entries.push_back(std::move(entry));
  }
  return report;
}

std::string to_json_string(const SummaryReport& report) {
  json j;
  j["parameters"] = json::array();
  for (const auto& p : report.parameters) {
    j["parameters"].push_back({{"name", p.name},
                               {"mean", p.mean},
                               {"sd", p.sd},
                               {"ci_lower", p.ci_lower},
                               {"ci_upper", p.ci_upper}});
  }
  j["ess"] = report.ess;
  j["n_draws"] = report.n_draws;
  j["credible_level"] = report.credible_level;
  j["warnings"] = report.warnings;
  return j.dump(2);
}

std::string to_json_string(const JeffreysLimitReport& report) {
  json entries = json::array();
  for (std::size_t i = 0; i < report.total_mass_grid.size(); ++i) {
    entries.push_back({{"total_mass", report.total_mass_grid[i]},
                       {"sup_discrepancy", report.sup_discrepancy[i]}});
  }
  json j{{"experiment", "jeffreys_limit"},
         {"n", report.n},
         {"grid_points", report.grid_points},
         {"entries", entries}};
  return j.dump(2);
}

std::string to_json_string(const NormalityReport& report) {
  json entries = json::array();
  for (const auto& e : report.entries) {
    json emp = json::array(), asy = json::array();
    for (Eigen::Index r = 0; r < e.empirical_cov.rows(); ++r) {
      json er = json::array(), ar = json::array();
      for (Eigen::Index c = 0; c < e.empirical_cov.cols(); ++c) {
        er.push_back(e.empirical_cov(r, c));
        ar.push_back(e.asymptotic_cov(r, c));
      }
      emp.push_back(er);
      asy.push_back(ar);
    }
    entries.push_back({{"n", e.n},
                       {"rel_frobenius_error", e.rel_frobenius_error},
                       {"empirical_cov", emp},
                       {"asymptotic_cov", asy}});
  }
  json j{{"experiment", "asymptotic_normality"},
         {"entries", entries},
         {"errors_decreasing", report.errors_decreasing()}};
  return j.dump(2);
}

}  // namespace cdp
