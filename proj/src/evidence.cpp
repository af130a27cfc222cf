#include "darkmeter/evidence.hpp"

#include "darkmeter/density.hpp"
#include "darkmeter/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace darkmeter {

double SavageDickey::bf10() const
{
  if (posterior_vanishes)
    return std::numeric_limits<double>::infinity();
  return 1.0 / ratio;
}

SavageDickey savage_dickey(std::span<const double> mu_draws, const PriorSpec& prior, Side variant)
{
  prior.validate();
  const auto support = variant == Side::TwoSided ? Support::Full : Support::NonNegative;

  SavageDickey sd;
  sd.prior_density = prior_mu_density(prior, 0.0, variant);
  if (variant == Side::PositiveOnly && positive_part(mu_draws).draws.size() < 2) {
    sd.posterior_vanishes = true;
    sd.extrapolated = true;
    return sd;
  }
  const auto est = density_at(mu_draws, 0.0, support);
  sd.posterior_density = est.value;
  sd.bandwidth = est.bandwidth;
  sd.extrapolated = est.extrapolated;
  if (!(est.value > std::numeric_limits<double>::min())) {
    sd.posterior_vanishes = true;
    sd.posterior_density = 0.0;
    return sd;
  }
  sd.ratio = est.value / sd.prior_density;
  return sd;
}

PosteriorSummary summarize_posterior(const PosteriorSamples& samples,
                                     const PriorSpec& prior,
                                     double mass)
{
  if (!samples.diagnostics.converged)
    throw ConvergenceError("sampler did not converge (R-hat or ESS out of bounds); "
                           "evidence measures are not computed from flagged runs");
  const auto& draws = samples.mu_draws;

  PosteriorSummary s;
  s.mass = mass;
  s.f = prior.f_mu;

  const auto n = static_cast<double>(draws.size());
  for (double x : draws)
    s.mean += x;
  s.mean /= n;
  double ss = 0.0;
  for (double x : draws)
    ss += (x - s.mean) * (x - s.mean);
  s.sd = std::sqrt(ss / (n - 1.0));

  s.hdi_full = hdi(draws, mass);
  s.pd_plus = pd_plus(draws);

  const auto pos = positive_part(draws);
  s.positive_fraction = pos.retained_fraction;
  if (pos.draws.size() >= min_draws) {
    s.hdi_pos = hdi(pos.draws, mass);
  } else if (!pos.empty) {
    s.hdi_pos = shortest_window(pos.draws, mass);
    s.warnings.push_back("positive part holds only " + std::to_string(pos.draws.size()) +
                         " draws; upper limit is Monte-Carlo noisy");
  } else {
    s.hdi_pos = {0.0, 0.0};
    s.warnings.push_back("no positive draws; upper limit reported as 0+");
  }

  const auto full = savage_dickey(draws, prior, Side::TwoSided);
  const auto positive = savage_dickey(draws, prior, Side::PositiveOnly);
  s.sd_ratio_full = full.ratio;
  s.sd_ratio_pos = positive.ratio;
  if (full.posterior_vanishes || positive.posterior_vanishes)
    s.warnings.push_back("posterior density at 0 vanishes; decisive evidence against mu = 0");
  if (full.extrapolated || positive.extrapolated)
    s.warnings.push_back("0 lies outside the range of the posterior draws; density extrapolated");
  return s;
}

} // namespace darkmeter
