#include "darkmeter/density.hpp"

#include "darkmeter/error.hpp"
#include "darkmeter/intervals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace darkmeter {

namespace {

double quantile_sorted(const std::vector<double>& sorted, double p)
{
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

} // namespace

double silverman_bandwidth(std::span<const double> draws)
{
  if (draws.size() < 2)
    throw InsufficientDataError("bandwidth selection needs at least two draws");
  const auto n = static_cast<double>(draws.size());
  double mean = 0.0;
  for (double x : draws)
    mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : draws)
    ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / (n - 1.0));

  std::vector<double> sorted(draws.begin(), draws.end());
  std::sort(sorted.begin(), sorted.end());
  const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);

  double spread = sd;
  if (iqr > 0.0)
    spread = std::min(sd, iqr / 1.34);
  return 0.9 * spread * std::pow(n, -0.2);
}

DensityEstimate density_at(std::span<const double> draws, double x, Support support)
{
  if (draws.size() < min_draws)
    throw InsufficientDataError("density estimation needs at least " + std::to_string(min_draws) +
                                " draws");

  std::vector<double> used;
  if (support == Support::NonNegative) {
    for (double d : draws)
      if (d >= 0.0)
        used.push_back(d);
    if (used.size() < 2)
      throw EmptyResultError("fewer than two non-negative draws; no positive-part density");
    if (x < 0.0)
      return {0.0, 0.0, used.size(), false};
  } else {
    used.assign(draws.begin(), draws.end());
  }

  DensityEstimate est;
  est.draws_used = used.size();
  est.bandwidth = silverman_bandwidth(used);
  const auto [mn, mx] = std::minmax_element(used.begin(), used.end());
  est.extrapolated = x < *mn || x > *mx;
  if (support == Support::NonNegative)
    est.extrapolated = x > *mx;

  const double h = est.bandwidth;
  if (!(h > 0.0)) {
    // all draws identical: a point mass has no finite density
    est.value = x == *mn ? INFINITY : 0.0;
    return est;
  }
  double sum = 0.0;
  for (double d : used) {
    const double u = (x - d) / h;
    sum += std::exp(-0.5 * u * u);
    if (support == Support::NonNegative) {
      const double r = (x + d) / h;
      sum += std::exp(-0.5 * r * r);
    }
  }
  est.value = sum / (static_cast<double>(used.size()) * h * std::sqrt(2.0 * std::numbers::pi));
  return est;
}

} // namespace darkmeter
