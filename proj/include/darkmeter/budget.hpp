#pragma once

#include "darkmeter/common.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace darkmeter {

//! Two independent posteriors (black and metallic shutter side) plus the
//! flash-count ratio q and the reflectivity ratio rho_b / rho_m.
struct FlashModelInput
{
  GaussianEstimate delta_b;
  GaussianEstimate delta_m;
  double q = 1.0;
  double rho_ratio = 0.0;
};

/*
 * Light counts with the reflected-flash offset removed:
 *   C_L = (delta_b - k delta_m) / (1 - k),  k = rho_ratio q,
 * propagated exactly for independent Gaussian inputs.
 * Throws DomainError when k = 1 or the inputs are out of range.
 */
GaussianEstimate flash_corrected(const FlashModelInput& input);

//! Monte-Carlo version of flash_corrected for cross-checking.
GaussianEstimate flash_corrected_sampled(const FlashModelInput& input,
                                         std::size_t draws,
                                         std::uint64_t seed);

struct RhoSweepRow
{
  double rho_ratio = 0.0;
  double mean = 0.0;
  double sd = 0.0;
};

std::vector<RhoSweepRow> rho_sweep(const FlashModelInput& base, std::span<const double> rho_grid);

//! `count` log-spaced points from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t count);

//! Predicted 0.95 interval length in darkness: 1.96 sqrt(2 var_rd / n).
double dark_hdi_length(double var_rd, std::size_t n);

inline constexpr double reference_spot_diameter_mm = 0.180;

//! Rescales a detector-area upper limit to a retinal spot of the given diameter.
double retina_scaling(double upper_limit, double spot_diameter_mm);

} // namespace darkmeter
