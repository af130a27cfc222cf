#include "darkmeter/sweep.hpp"

#include "darkmeter/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace darkmeter {

std::vector<double> default_f_grid(std::size_t n)
{
  return {1.0, 3.0, 10.0, 30.0, 100.0, 300.0, 1e3, 1e4, 1e5, 0.707 * static_cast<double>(n)};
}

std::vector<PosteriorSummary> sensitivity_sweep(const SufficientStats& stats,
                                                std::span<const double> f_grid,
                                                const McmcConfig& cfg,
                                                double mass)
{
  if (f_grid.empty())
    throw DomainError("empty f grid");
  if (!std::is_sorted(f_grid.begin(), f_grid.end()))
    throw DomainError("f grid must be sorted ascending");

  SeriesSummary summary;
  summary.n = stats.n;
  summary.mean = stats.mean;
  summary.variance = stats.variance;

  std::vector<PosteriorSummary> rows;
  rows.reserve(f_grid.size());
  for (double f : f_grid) {
    const auto prior = derive_priors(summary, f, f);
    const auto samples = sample_posterior(stats, prior, cfg);
    if (!samples.diagnostics.converged)
      throw ConvergenceError("sampler did not converge at f = " + std::to_string(f));
    rows.push_back(summarize_posterior(samples, prior, mass));
  }
  return rows;
}

PowerLawFit powerlaw_fit(std::span<const PowerLawPoint> points, double threshold)
{
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& p : points) {
    if (p.f < threshold)
      continue;
    if (!(p.f > 0.0) || !(p.r > 0.0) || !std::isfinite(p.r))
      throw DomainError("power-law fit needs positive finite f and r");
    x.push_back(std::log(p.f));
    y.push_back(std::log(p.r));
  }
  if (x.size() < 3)
    throw InsufficientDataError("power-law fit needs at least 3 points with f >= threshold, got " +
                                std::to_string(x.size()));

  const auto n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0))
    throw DomainError("power-law fit needs at least two distinct f values");

  PowerLawFit fit;
  fit.b = sxy / sxx;
  const double log_a = my - fit.b * mx;
  fit.a = std::exp(log_a);
  fit.points = x.size();
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (log_a + fit.b * x[i]);
    rss += r * r;
  }
  fit.rms_log_residual = std::sqrt(rss / n);
  return fit;
}

} // namespace darkmeter
