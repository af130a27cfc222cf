#pragma once

#include "darkmeter/common.hpp"
#include "darkmeter/protocol.hpp"

namespace darkmeter {

/*
 * Normal prior N(mu0, sigma0_sq) on the mean difference and a Gamma(alpha0,
 * rate beta0) prior on the difference variance. The broadening factors widen
 * the variance of the sample mean (f_mu) and the variance of the sample
 * variance (f_sigma) that the hyperparameters are built from.
 */
struct PriorSpec
{
  double mu0 = 0.0;
  double sigma0_sq = 1.0;
  double alpha0 = 1.0;
  double beta0 = 1.0;
  double f_mu = 1.0;
  double f_sigma = 1.0;

  void validate() const;
};

/*
 * Data-dependent hyperparameters:
 *   mu0 = max(0, mean), sigma0_sq = f_mu var / n,
 *   beta0 = n / (2 f_sigma var), alpha0 = var beta0.
 * The Gamma prior therefore has mean var.
 */
PriorSpec derive_priors(const SeriesSummary& summary, double f_mu, double f_sigma);

//! Prior density of the mean at x; PositiveOnly renormalizes to x >= 0.
double prior_mu_density(const PriorSpec& prior, double x, Side side);

} // namespace darkmeter
