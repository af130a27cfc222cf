#pragma once

// Posterior of a normal mean with the variance treated as known.

#include <cmath>
#include <cstddef>

namespace oracle {

struct NormalPosterior
{
  double mean;
  double sd;
};

inline NormalPosterior known_variance_posterior(double mu0, double sigma0_sq, double xbar, double sigma_sq,
                                                std::size_t n)
{
  const double prec = 1.0 / sigma0_sq + static_cast<double>(n) / sigma_sq;
  return {(mu0 / sigma0_sq + static_cast<double>(n) * xbar / sigma_sq) / prec, std::sqrt(1.0 / prec)};
}

} // namespace oracle
