#pragma once

#include "darkmeter/common.hpp"
#include "darkmeter/intervals.hpp"
#include "darkmeter/prior.hpp"
#include "darkmeter/sampler.hpp"

#include <span>
#include <string>
#include <vector>

namespace darkmeter {

struct SavageDickey
{
  double ratio = 0.0; //!< posterior over prior density of the mean at 0 (BF01)
  double posterior_density = 0.0;
  double prior_density = 0.0;
  double bandwidth = 0.0;
  bool posterior_vanishes = false; //!< decisive evidence against the null
  bool extrapolated = false;

  //! Evidence for a non-zero mean; +inf when the posterior vanishes at 0.
  double bf10() const;
};

/*
 * Savage-Dickey density ratio at mu = 0. TwoSided compares the full posterior
 * with the full normal prior; PositiveOnly compares both truncated to mu >= 0,
 * each renormalized to its positive mass.
 */
SavageDickey savage_dickey(std::span<const double> mu_draws, const PriorSpec& prior, Side variant);

struct PosteriorSummary
{
  double mean = 0.0;
  double sd = 0.0;
  double mass = 0.95;
  Interval hdi_full;
  Interval hdi_pos;                //!< from the positive part; hi is the upper limit
  double positive_fraction = 0.0;
  double pd_plus = 0.0;
  double sd_ratio_full = 0.0;
  double sd_ratio_pos = 0.0;
  double f = 0.0;                  //!< broadening factor (f_mu) of the prior used
  std::vector<std::string> warnings;
};

//! Throws ConvergenceError when the sampler flagged the run.
PosteriorSummary summarize_posterior(const PosteriorSamples& samples,
                                     const PriorSpec& prior,
                                     double mass = 0.95);

} // namespace darkmeter
