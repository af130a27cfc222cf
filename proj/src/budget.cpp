#include "darkmeter/budget.hpp"

#include "darkmeter/error.hpp"

#include <cmath>
#include <random>

namespace darkmeter {

namespace {

double checked_k(const FlashModelInput& in)
{
  if (!(in.q > 0.0))
    throw DomainError("q must be positive");
  if (!(in.rho_ratio >= 0.0))
    throw DomainError("rho_ratio must be non-negative");
  if (!(in.delta_b.sd >= 0.0) || !(in.delta_m.sd >= 0.0))
    throw DomainError("standard deviations must be non-negative");
  const double k = in.rho_ratio * in.q;
  if (std::abs(1.0 - k) < 1e-12)
    throw DomainError("rho_ratio * q = 1: flash correction is singular");
  return k;
}

} // namespace

GaussianEstimate flash_corrected(const FlashModelInput& input)
{
  const double k = checked_k(input);
  if (k == 0.0)
    return input.delta_b;
  const double denom = 1.0 - k;
  const double mean = (input.delta_b.mean - k * input.delta_m.mean) / denom;
  const double sd = std::hypot(input.delta_b.sd, k * input.delta_m.sd) / std::abs(denom);
  return {mean, sd};
}

GaussianEstimate flash_corrected_sampled(const FlashModelInput& input,
                                         std::size_t draws,
                                         std::uint64_t seed)
{
  const double k = checked_k(input);
  if (draws < 2)
    throw DomainError("sampling propagation needs at least two draws");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> b(input.delta_b.mean, input.delta_b.sd);
  std::normal_distribution<double> m(input.delta_m.mean, input.delta_m.sd);
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < draws; ++i) {
    const double c = (b(rng) - k * m(rng)) / (1.0 - k);
    const double d = c - mean;
    mean += d / static_cast<double>(i + 1);
    m2 += d * (c - mean);
  }
  return {mean, std::sqrt(m2 / static_cast<double>(draws - 1))};
}

std::vector<RhoSweepRow> rho_sweep(const FlashModelInput& base, std::span<const double> rho_grid)
{
  std::vector<RhoSweepRow> rows;
  rows.reserve(rho_grid.size());
  for (double rho : rho_grid) {
    auto in = base;
    in.rho_ratio = rho;
    const auto est = flash_corrected(in);
    rows.push_back({rho, est.mean, est.sd});
  }
  return rows;
}

std::vector<double> log_grid(double lo, double hi, std::size_t count)
{
  if (!(lo > 0.0) || !(hi > lo) || count < 2)
    throw DomainError("log grid needs 0 < lo < hi and at least two points");
  std::vector<double> grid(count);
  const double step = std::log(hi / lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i)
    grid[i] = lo * std::exp(step * static_cast<double>(i));
  grid.back() = hi;
  return grid;
}

double dark_hdi_length(double var_rd, std::size_t n)
{
  if (!(var_rd > 0.0))
    throw DomainError("dark-rate variance must be positive");
  if (n < 1)
    throw DomainError("n must be at least 1");
  return 1.96 * std::sqrt(2.0 * var_rd / static_cast<double>(n));
}

double retina_scaling(double upper_limit, double spot_diameter_mm)
{
  if (!(spot_diameter_mm > 0.0))
    throw DomainError("spot diameter must be positive");
  return upper_limit * spot_diameter_mm / reference_spot_diameter_mm;
}

} // namespace darkmeter
