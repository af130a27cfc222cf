#pragma once

#include "darkmeter/evidence.hpp"

#include <span>
#include <vector>

namespace darkmeter {

//! {1, 3, 10, 30, 100, 300, 1e3, 1e4, 1e5, 0.707 n}
std::vector<double> default_f_grid(std::size_t n);

inline constexpr double default_fit_threshold = 10.0;

/*
 * One full analysis per broadening factor (f_mu = f_sigma = f). Every run
 * uses the same sampler seed. f_grid must be ascending; a non-converged run
 * aborts the sweep with ConvergenceError.
 */
std::vector<PosteriorSummary> sensitivity_sweep(const SufficientStats& stats,
                                                std::span<const double> f_grid,
                                                const McmcConfig& cfg,
                                                double mass = 0.95);

struct PowerLawPoint
{
  double f = 0.0;
  double r = 0.0;
};

//! r = a f^b
struct PowerLawFit
{
  double a = 0.0;
  double b = 0.0;
  std::size_t points = 0;
  double rms_log_residual = 0.0; //!< natural-log residuals
};

//! Least squares of log r on log f over points with f >= threshold.
PowerLawFit powerlaw_fit(std::span<const PowerLawPoint> points,
                         double threshold = default_fit_threshold);

} // namespace darkmeter
