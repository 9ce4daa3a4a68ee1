#pragma once

#include <string>
#include <vector>

#include "cdpinfer/rng.hpp"

namespace cdp {

enum class FamilyKind { Normal, Cauchy, StudentT, Gamma, Beta, Uniform, Empirical };

/// One-dimensional distribution with mutually consistent log-pdf, CDF,
/// quantile and inverse-CDF sampler. Immutable after construction.
class ParametricFamily {
public:
  static ParametricFamily normal(double mean, double sd);
  static ParametricFamily cauchy(double location, double scale);
  static ParametricFamily student_t(double dof, double location, double scale);
  static ParametricFamily gamma(double shape, double rate);
  static ParametricFamily beta(double a, double b);
  static ParametricFamily uniform(double lower, double upper);
  /// Discrete uniform-weight distribution on the given values (must be
  /// sorted non-decreasing and nonempty). Has no Lebesgue density.
  static ParametricFamily empirical(std::vector<double> sorted_values);

  FamilyKind kind() const noexcept { return kind_; }
  double param1() const noexcept { return p1_; }
  double param2() const noexcept { return p2_; }
  double param3() const noexcept { return p3_; }
  const std::vector<double>& values() const { return values_; }

  double log_pdf(double x) const;
  double cdf(double x) const;
  double quantile(double u) const;
  double sample(RngState& rng) const { return quantile(rng.uniform01()); }

  std::string describe() const;

private:
  ParametricFamily(FamilyKind kind, double p1, double p2, double p3,
                   std::vector<double> values);

  FamilyKind kind_;
  double p1_ = 0.0, p2_ = 0.0, p3_ = 0.0;
  std::vector<double> values_;
};

/// Dirichlet process parameter alpha = A * abar: a total mass and a
/// normalized base distribution.
class BaseMeasure {
public:
  BaseMeasure(double total_mass, ParametricFamily base);

  double total_mass() const noexcept { return total_mass_; }
  const ParametricFamily& base() const noexcept { return base_; }

  /// alpha-mass of the interval (lower, upper].
  double interval_mass(double lower, double upper) const;

private:
  double total_mass_;
  ParametricFamily base_;
};

}  // namespace cdp
