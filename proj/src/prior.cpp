#include "darkmeter/prior.hpp"

#include "darkmeter/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace darkmeter {

void PriorSpec::validate() const
{
  if (!(sigma0_sq > 0.0) || !(alpha0 > 0.0) || !(beta0 > 0.0))
    throw DegeneratePriorError("prior needs sigma0_sq, alpha0 and beta0 > 0");
  if (!(f_mu > 0.0) || !(f_sigma > 0.0))
    throw DomainError("broadening factors must be positive");
  if (!std::isfinite(mu0))
    throw DomainError("prior mean must be finite");
}

PriorSpec derive_priors(const SeriesSummary& summary, double f_mu, double f_sigma)
{
  if (summary.n < 2)
    throw InsufficientDataError("deriving priors needs n >= 2");
  if (!(f_mu > 0.0) || !(f_sigma > 0.0))
    throw DomainError("broadening factors must be positive");
  if (!(summary.variance > 0.0))
    throw DegeneratePriorError("sample variance is zero; the data-dependent prior is degenerate");

  const auto n = static_cast<double>(summary.n);
  PriorSpec p;
  p.mu0 = std::max(0.0, summary.mean);
  p.sigma0_sq = f_mu * summary.variance / n;
  p.beta0 = n / (2.0 * f_sigma * summary.variance);
  p.alpha0 = summary.variance * p.beta0;
  p.f_mu = f_mu;
  p.f_sigma = f_sigma;
  return p;
}

double prior_mu_density(const PriorSpec& prior, double x, Side side)
{
  const double sd = std::sqrt(prior.sigma0_sq);
  const double z = (x - prior.mu0) / sd;
  const double pdf = std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
  if (side == Side::TwoSided)
    return pdf;
  if (x < 0.0)
    return 0.0;
  // mass of the normal prior above zero
  const double positive_mass = 0.5 * std::erfc(-prior.mu0 / (sd * std::numbers::sqrt2));
  return pdf / positive_mass;
}

} // namespace darkmeter
