#pragma once

#include "darkmeter/common.hpp"

#include <cstddef>

namespace darkmeter {

struct TTestInput
{
  double t = 0.0;
  std::size_t n = 0;
  double scale = 0.707; //!< Cauchy scale on the standardized effect
  Side side = Side::TwoSided;
};

struct JzsResult
{
  double bf01 = 0.0;
  double bf10 = 0.0;
  double relative_error = 0.0; //!< quadrature error estimate on bf10
  std::size_t evaluations = 0; //!< outer integrand evaluations
};

//! One-sample t statistic mean / (sqrt(variance) / sqrt(n)).
double t_statistic(double mean, double variance, std::size_t n);

/*
 * log of f(t | nu, ncp) / f(t | nu, 0) for Student t densities, computed as an
 * expectation over the chi-square mixing variable. Stable for nu in the
 * millions where series expansions of the noncentral t break down.
 */
double log_noncentral_t_ratio(double t, double nu, double ncp);

inline constexpr double jzs_tolerance = 1e-6;

/*
 * Bayes factor for effect size delta = 0 against a Cauchy(0, scale) prior on
 * delta (half-Cauchy on delta >= 0 for PositiveOnly), with the variance
 * integrated out under the Jeffreys prior. The prior is compactified through
 * delta = scale tan(theta) and integrated by adaptive Gauss-Kronrod.
 *
 * Throws NumericError when the estimated relative error exceeds 1e-6.
 */
JzsResult jzs_bf01(const TTestInput& input);

} // namespace darkmeter
