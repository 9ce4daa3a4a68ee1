#pragma once

#include <span>
#include <vector>

namespace cdp {

/// log of the rising factorial [a]_k = a(a+1)...(a+k-1) = Gamma(a+k)/Gamma(a),
/// evaluated in log space. k = 0 gives exactly 0. Throws std::domain_error
/// for a <= 0 or non-finite a.
double log_rising_factorial(double a, long long k);

/// log density of a Dirichlet distribution at a point of the open simplex.
/// Any coordinate <= 0 yields -infinity. Throws std::domain_error if the
/// parameter vector has a non-positive entry, the lengths differ, or x does
/// not sum to 1 within 1e-9.
double log_dirichlet_density(std::span<const double> x,
                             std::span<const double> params);

/// log(sum(exp(v))) with max subtraction; -infinity for an empty or
/// all -infinity input.
double log_sum_exp(std::span<const double> v);

/// Accurate sum (Kahan compensation).
double stable_sum(std::span<const double> v);

/// Type-1 empirical quantile inf{x : F_n(x) >= p} of sorted values.
double empirical_quantile(std::span<const double> sorted, double p);

/// Interquartile range of sorted values.
double interquartile_range(std::span<const double> sorted);

}  // namespace cdp
