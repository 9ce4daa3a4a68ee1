#include "cdpinfer/kde.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "cdpinfer/errors.hpp"

namespace cdp {

ProductKde::ProductKde(std::size_t dim, std::vector<double> points_flat)
    : dim_(dim), points_(std::move(points_flat)) {
  if (dim_ == 0 || points_.empty() || points_.size() % dim_ != 0) {
    throw std::invalid_argument("kde: points must be a nonempty multiple of dim");
  }
  n_ = points_.size() / dim_;
  if (n_ < 2) throw std::invalid_argument("kde: needs at least two points");

  bandwidths_.resize(dim_);
  const double scott = std::pow(static_cast<double>(n_),
                                -1.0 / (static_cast<double>(dim_) + 4.0));
  for (std::size_t j = 0; j < dim_; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n_; ++i) mean += points_[i * dim_ + j];
    mean /= static_cast<double>(n_);
    double ss = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double d = points_[i * dim_ + j] - mean;
      ss += d * d;
    }
    const double sd = std::sqrt(ss / static_cast<double>(n_ - 1));
    if (!(sd > 0.0) || !std::isfinite(sd)) {
      throw NumericalError("kde: coordinate " + std::to_string(j) +
                           " has zero or non-finite spread");
    }
    bandwidths_[j] = sd * scott;
  }
  log_norm_ = -std::log(static_cast<double>(n_)) -
              0.5 * static_cast<double>(dim_) * std::log(2.0 * std::numbers::pi);
  for (double h : bandwidths_) log_norm_ -= std::log(h);
}

ProductKde::ProductKde(const ProductKde& other)
    : dim_(other.dim_),
      n_(other.n_),
      points_(other.points_),
      bandwidths_(other.bandwidths_),
      log_norm_(other.log_norm_),
      floored_(other.floored_.load()) {}

ProductKde::ProductKde(ProductKde&& other) noexcept
    : dim_(other.dim_),
      n_(other.n_),
      points_(std::move(other.points_)),
      bandwidths_(std::move(other.bandwidths_)),
      log_norm_(other.log_norm_),
      floored_(other.floored_.load()) {}

double ProductKde::log_density(std::span<const double> x) const {
  if (x.size() != dim_) throw std::invalid_argument("kde: dimension mismatch");
  double max_e = -std::numeric_limits<double>::infinity();
  std::vector<double> exponents(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    double e = 0.0;
    const double* p = points_.data() + i * dim_;
    for (std::size_t j = 0; j < dim_; ++j) {
      const double z = (x[j] - p[j]) / bandwidths_[j];
      e -= 0.5 * z * z;
    }
    exponents[i] = e;
    if (e > max_e) max_e = e;
  }
  double value;
  if (!std::isfinite(max_e)) {
    value = -std::numeric_limits<double>::infinity();
  } else {
    double s = 0.0;
    for (double e : exponents) s += std::exp(e - max_e);
    value = log_norm_ + max_e + std::log(s);
  }
  if (value < kLogFloor) {
    floored_.fetch_add(1, std::memory_order_relaxed);
    return kLogFloor;
  }
  return value;
}

}  // namespace cdp
