#include "darkmeter/intervals.hpp"

#include "darkmeter/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace darkmeter {

namespace {

void require_draws(std::span<const double> draws)
{
  if (draws.size() < min_draws)
    throw InsufficientDataError("at least " + std::to_string(min_draws) + " draws required, got " +
                                std::to_string(draws.size()));
}

} // namespace

Interval hdi(std::span<const double> draws, double mass)
{
  if (!(mass > 0.0 && mass < 1.0))
    throw DomainError("HDI mass must lie in (0, 1)");
  require_draws(draws);
  return shortest_window(draws, mass);
}

Interval shortest_window(std::span<const double> draws, double mass)
{
  if (!(mass > 0.0 && mass < 1.0))
    throw DomainError("HDI mass must lie in (0, 1)");
  if (draws.empty())
    throw InsufficientDataError("no draws");

  std::vector<double> sorted(draws.begin(), draws.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  const auto window = std::min<std::size_t>(
    n, static_cast<std::size_t>(std::ceil(mass * static_cast<double>(n))));

  std::size_t best = 0;
  double best_width = sorted[window - 1] - sorted[0];
  for (std::size_t i = 1; i + window <= n; ++i) {
    const double width = sorted[i + window - 1] - sorted[i];
    if (width < best_width) {
      best_width = width;
      best = i;
    }
  }
  return {sorted[best], sorted[best + window - 1]};
}

PositivePart positive_part(std::span<const double> draws)
{
  require_draws(draws);
  PositivePart p;
  for (double x : draws)
    if (x >= 0.0)
      p.draws.push_back(x);
  p.retained_fraction = static_cast<double>(p.draws.size()) / static_cast<double>(draws.size());
  p.empty = p.draws.empty();
  return p;
}

double pd_plus(std::span<const double> draws)
{
  require_draws(draws);
  const auto positive = std::count_if(draws.begin(), draws.end(), [](double x) { return x > 0.0; });
  return static_cast<double>(positive) / static_cast<double>(draws.size());
}

} // namespace darkmeter
