#pragma once

// Monte-Carlo propagation of independent Gaussian inputs through a function.

#include <cmath>
#include <cstdint>
#include <random>

namespace oracle {

struct Moments
{
  double mean;
  double sd;
};

template <class F>
Moments propagate(double m1, double s1, double m2, double s2, F f, std::size_t draws, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> a(m1, s1);
  std::normal_distribution<double> b(m2, s2);
  double mean = 0.0;
  double m2acc = 0.0;
  for (std::size_t i = 0; i < draws; ++i) {
    const double x = f(a(rng), b(rng));
    const double d = x - mean;
    mean += d / static_cast<double>(i + 1);
    m2acc += d * (x - mean);
  }
  return {mean, std::sqrt(m2acc / static_cast<double>(draws - 1))};
}

} // namespace oracle
