#pragma once

namespace darkmeter {

//! Mean and standard deviation of a quantity assumed normally distributed.
struct GaussianEstimate
{
  double mean = 0.0;
  double sd = 0.0;
};

//! Which alternative hypothesis a Bayes factor is computed against.
enum class Side
{
  TwoSided,
  PositiveOnly
};

} // namespace darkmeter
