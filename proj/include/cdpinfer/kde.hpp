#pragma once

#include <atomic>
#include <cstddef>
#include <span>
#include <vector>

namespace cdp {

/// Product-Gaussian kernel density estimate in d dimensions with
/// per-coordinate Scott-rule bandwidths. Evaluation is floored at 1e-300;
/// floored evaluations are counted so callers can surface a warning.
/// Read-only after construction and safe to share across threads.
class ProductKde {
public:
  ProductKde(std::size_t dim, std::vector<double> points_flat);

  ProductKde(const ProductKde& other);
  ProductKde(ProductKde&& other) noexcept;
  ProductKde& operator=(const ProductKde&) = delete;
  ProductKde& operator=(ProductKde&&) = delete;

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return n_; }
  const std::vector<double>& bandwidths() const noexcept { return bandwidths_; }
  const std::vector<double>& points_flat() const noexcept { return points_; }

  double log_density(std::span<const double> x) const;
  std::size_t floored_evaluations() const { return floored_.load(); }

  static constexpr double kLogFloor = -690.77552789821368;  // log(1e-300)

private:
  std::size_t dim_;
  std::size_t n_;
  std::vector<double> points_;
  std::vector<double> bandwidths_;
  double log_norm_ = 0.0;
  mutable std::atomic<std::size_t> floored_{0};
};

}  // namespace cdp
