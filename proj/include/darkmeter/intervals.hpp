#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace darkmeter {

inline constexpr std::size_t min_draws = 1000;

struct Interval
{
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double x) const { return lo <= x && x <= hi; }
};

//! Shortest window holding ceil(mass * n) of the sorted draws.
Interval hdi(std::span<const double> draws, double mass);

//! hdi() without the minimum-draw requirement; needs at least one draw.
Interval shortest_window(std::span<const double> draws, double mass);

struct PositivePart
{
  std::vector<double> draws;     //!< draws >= 0
  double retained_fraction = 0.0;
  bool empty = true;
};

PositivePart positive_part(std::span<const double> draws);

//! Fraction of draws strictly above zero; zeros count as non-positive.
double pd_plus(std::span<const double> draws);

} // namespace darkmeter
