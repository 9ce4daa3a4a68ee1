#pragma once

#include <Eigen/Core>

#include <span>
#include <string>
#include <vector>

#include "cdpinfer/quantile.hpp"
#include "cdpinfer/samples.hpp"

namespace cdp {

/// Per-total-mass comparison of the normalized quantile posterior against the
/// normalized Jeffreys-likelihood-times-prior over a fixed theta grid, with
/// alpha = A * F_n (empirical base).
struct JeffreysLimitReport {
  std::vector<double> total_mass_grid;
  std::vector<double> sup_discrepancy;  // sup-norm per total mass
  std::size_t grid_points = 0;
  std::size_t n = 0;
};

JeffreysLimitReport validate_jeffreys_limit(std::span<const double> data,
                                            const QuantileSpec& spec,
                                            std::span<const double> mass_grid,
                                            std::span<const double> theta_grid,
                                            const ThetaPrior& prior);

/// Default 512-point theta grid spanning [min - 3 IQR, max + 3 IQR], nudged
/// off exact data values.
std::vector<double> default_theta_grid(std::span<const double> data,
                                       std::size_t points = 512);

/// Covariance comparison of scaled posterior draws sqrt(n)(theta - q_n)
/// against the analytic large-sample covariance, per sample size.
struct NormalityEntry {
  std::size_t n = 0;
  Eigen::MatrixXd empirical_cov;
  Eigen::MatrixXd asymptotic_cov;
  double rel_frobenius_error = 0.0;
};

struct NormalityReport {
  std::vector<NormalityEntry> entries;
  /// True when the errors decrease with n, allowing one inversion.
  bool errors_decreasing() const;
};

NormalityReport validate_asymptotic_normality(const ParametricFamily& dist,
                                              const QuantileSpec& spec,
                                              std::span<const std::size_t> n_grid,
                                              std::size_t replicates,
                                              const SamplerConfig& config,
                                              RngState& rng);

/// JSON renderings of reports (documented shapes; see README).
std::string to_json_string(const SummaryReport& report);
std::string to_json_string(const JeffreysLimitReport& report);
std::string to_json_string(const NormalityReport& report);

}  // namespace cdp
