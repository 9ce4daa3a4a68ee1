#include "cdpinfer/families.hpp"

#include <boost/math/distributions/gamma.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace cdp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::domain_error(std::string(what) + " must be positive and finite");
  }
}

void require_unit_interval(double u) {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw std::domain_error("quantile: u must lie in [0,1]");
  }
}

}  // namespace

ParametricFamily::ParametricFamily(FamilyKind kind, double p1, double p2,
                                   double p3, std::vector<double> values)
    : kind_(kind), p1_(p1), p2_(p2), p3_(p3), values_(std::move(values)) {}

ParametricFamily ParametricFamily::normal(double mean, double sd) {
  require_positive(sd, "normal sd");
  return {FamilyKind::Normal, mean, sd, 0.0, {}};
}

ParametricFamily ParametricFamily::cauchy(double location, double scale) {
  require_positive(scale, "cauchy scale");
  return {FamilyKind::Cauchy, location, scale, 0.0, {}};
}

ParametricFamily ParametricFamily::student_t(double dof, double location,
                                             double scale) {
  require_positive(dof, "student_t dof");
  require_positive(scale, "student_t scale");
  return {FamilyKind::StudentT, dof, location, scale, {}};
}

ParametricFamily ParametricFamily::gamma(double shape, double rate) {
  require_positive(shape, "gamma shape");
  require_positive(rate, "gamma rate");
  return {FamilyKind::Gamma, shape, rate, 0.0, {}};
}

ParametricFamily ParametricFamily::beta(double a, double b) {
  require_positive(a, "beta a");
  require_positive(b, "beta b");
  return {FamilyKind::Beta, a, b, 0.0, {}};
}

ParametricFamily ParametricFamily::uniform(double lower, double upper) {
  if (!(lower < upper) || !std::isfinite(lower) || !std::isfinite(upper)) {
    throw std::domain_error("uniform: require finite lower < upper");
  }
  return {FamilyKind::Uniform, lower, upper, 0.0, {}};
}

ParametricFamily ParametricFamily::empirical(std::vector<double> sorted_values) {
  if (sorted_values.empty()) {
    throw std::domain_error("empirical: values must be nonempty");
  }
  if (!std::is_sorted(sorted_values.begin(), sorted_values.end())) {
    throw std::domain_error("empirical: values must be sorted non-decreasing");
  }
  return {FamilyKind::Empirical, 0.0, 0.0, 0.0, std::move(sorted_values)};
}

double ParametricFamily::log_pdf(double x) const {
  switch (kind_) {
    case FamilyKind::Normal: {
      const double z = (x - p1_) / p2_;
      return -0.5 * z * z - std::log(p2_) - 0.5 * std::log(2.0 * std::numbers::pi);
    }
    case FamilyKind::Cauchy: {
      const double z = (x - p1_) / p2_;
      return -std::log(std::numbers::pi * p2_) - std::log1p(z * z);
    }
    case FamilyKind::StudentT: {
      const double nu = p1_;
      const double z = (x - p2_) / p3_;
      return std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
             0.5 * std::log(nu * std::numbers::pi) - std::log(p3_) -
             0.5 * (nu + 1.0) * std::log1p(z * z / nu);
    }
    case FamilyKind::Gamma: {
      if (x <= 0.0) return kNegInf;
      return p1_ * std::log(p2_) - std::lgamma(p1_) + (p1_ - 1.0) * std::log(x) -
             p2_ * x;
    }
    case FamilyKind::Beta: {
      if (x <= 0.0 || x >= 1.0) return kNegInf;
      return std::lgamma(p1_ + p2_) - std::lgamma(p1_) - std::lgamma(p2_) +
             (p1_ - 1.0) * std::log(x) + (p2_ - 1.0) * std::log1p(-x);
    }
    case FamilyKind::Uniform: {
      if (x < p1_ || x > p2_) return kNegInf;
      return -std::log(p2_ - p1_);
    }
    case FamilyKind::Empirical:
      throw std::domain_error("empirical family has no density");
  }
  throw std::logic_error("unreachable family kind");
}

double ParametricFamily::cdf(double x) const {
  switch (kind_) {
    case FamilyKind::Normal: {
      static const boost::math::normal_distribution<double> std_normal(0.0, 1.0);
      return boost::math::cdf(std_normal, (x - p1_) / p2_);
    }
    case FamilyKind::Cauchy:
      return 0.5 + std::atan((x - p1_) / p2_) / std::numbers::pi;
    case FamilyKind::StudentT: {
      const boost::math::students_t_distribution<double> t(p1_);
      return boost::math::cdf(t, (x - p2_) / p3_);
    }
    case FamilyKind::Gamma: {
      if (x <= 0.0) return 0.0;
      return boost::math::gamma_p(p1_, p2_ * x);
    }
    case FamilyKind::Beta: {
      if (x <= 0.0) return 0.0;
      if (x >= 1.0) return 1.0;
      return boost::math::ibeta(p1_, p2_, x);
    }
    case FamilyKind::Uniform: {
      if (x <= p1_) return 0.0;
      if (x >= p2_) return 1.0;
      return (x - p1_) / (p2_ - p1_);
    }
    case FamilyKind::Empirical: {
      const auto it = std::upper_bound(values_.begin(), values_.end(), x);
      return static_cast<double>(it - values_.begin()) /
             static_cast<double>(values_.size());
    }
  }
  throw std::logic_error("unreachable family kind");
}

double ParametricFamily::quantile(double u) const {
  require_unit_interval(u);
  switch (kind_) {
    case FamilyKind::Normal: {
      if (u == 0.0) return kNegInf;
      if (u == 1.0) return kInf;
      static const boost::math::normal_distribution<double> std_normal(0.0, 1.0);
      return p1_ + p2_ * boost::math::quantile(std_normal, u);
    }
    case FamilyKind::Cauchy: {
      if (u == 0.0) return kNegInf;
      if (u == 1.0) return kInf;
      return p1_ + p2_ * std::tan(std::numbers::pi * (u - 0.5));
    }
    case FamilyKind::StudentT: {
      if (u == 0.0) return kNegInf;
      if (u == 1.0) return kInf;
      const boost::math::students_t_distribution<double> t(p1_);
      return p2_ + p3_ * boost::math::quantile(t, u);
    }
    case FamilyKind::Gamma: {
      if (u == 0.0) return 0.0;
      if (u == 1.0) return kInf;
      return boost::math::gamma_p_inv(p1_, u) / p2_;
    }
    case FamilyKind::Beta: {
      if (u == 0.0) return 0.0;
      if (u == 1.0) return 1.0;
      return boost::math::ibeta_inv(p1_, p2_, u);
    }
    case FamilyKind::Uniform:
      return p1_ + (p2_ - p1_) * u;
    case FamilyKind::Empirical: {
      const auto n = values_.size();
      if (u == 0.0) return values_.front();
      auto idx = static_cast<std::size_t>(std::ceil(u * static_cast<double>(n)));
      if (idx > n) idx = n;
      return values_[idx - 1];
    }
  }
  throw std::logic_error("unreachable family kind");
}

std::string ParametricFamily::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case FamilyKind::Normal: os << "normal(" << p1_ << ", " << p2_ << ")"; break;
    case FamilyKind::Cauchy: os << "cauchy(" << p1_ << ", " << p2_ << ")"; break;
    case FamilyKind::StudentT:
      os << "student_t(" << p1_ << ", " << p2_ << ", " << p3_ << ")";
      break;
    case FamilyKind::Gamma: os << "gamma(" << p1_ << ", " << p2_ << ")"; break;
    case FamilyKind::Beta: os << "beta(" << p1_ << ", " << p2_ << ")"; break;
    case FamilyKind::Uniform: os << "uniform(" << p1_ << ", " << p2_ << ")"; break;
    case FamilyKind::Empirical:
      os << "empirical(n=" << values_.size() << ")";
      break;
  }
  return os.str();
}

BaseMeasure::BaseMeasure(double total_mass, ParametricFamily base)
    : total_mass_(total_mass), base_(std::move(base)) {
  require_positive(total_mass, "base measure total mass");
  // The normalized base must be a proper distribution.
  if (base_.cdf(-1e12) > 1e-9 || base_.cdf(1e12) < 1.0 - 1e-9) {
    throw std::domain_error("base measure: normalized base does not integrate to 1");
  }
}

double BaseMeasure::interval_mass(double lower, double upper) const {
  if (lower >= upper) return 0.0;
  const double lo = std::isfinite(lower) ? base_.cdf(lower) : 0.0;
  const double hi = std::isfinite(upper) ? base_.cdf(upper) : 1.0;
  return total_mass_ * (hi - lo);
}

}  // namespace cdp
