#pragma once

#include <cstddef>
#include <span>

namespace darkmeter {

enum class Support
{
  Full,
  NonNegative
};

struct DensityEstimate
{
  double value = 0.0;
  double bandwidth = 0.0;
  std::size_t draws_used = 0;
  bool extrapolated = false; //!< x lies outside the range of the draws
};

//! Silverman's rule: 0.9 min(sd, IQR / 1.34) n^(-1/5).
double silverman_bandwidth(std::span<const double> draws);

/*
 * Gaussian kernel density estimate at x. With NonNegative support only draws
 * >= 0 are used and they are reflected about 0, so the result is the density
 * of the positive part (renormalized to its own mass) without the usual
 * factor-of-two loss at the boundary.
 */
DensityEstimate density_at(std::span<const double> draws, double x, Support support);

} // namespace darkmeter
