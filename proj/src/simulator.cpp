#include "darkmeter/simulator.hpp"

#include "darkmeter/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace darkmeter {

void SimConfig::validate() const
{
  protocol.validate();
  if (!(dark.base_rate >= 0.0) || !(dark.clamp_min >= 0.0))
    throw DomainError("dark rates must be non-negative");
  if (!(light_rate >= 0.0) || !(flash_closed_rate >= 0.0))
    throw DomainError("light and flash rates must be non-negative");
  if (!(duration_hours > 0.0) || !std::isfinite(duration_hours))
    throw DomainError("duration must be positive");
  if (const auto* rw = std::get_if<RandomWalkDrift>(&dark.drift); rw && !(rw->step_sd_per_hour >= 0.0))
    throw DomainError("random-walk step sd must be non-negative");
  if (const auto* s = std::get_if<SinusoidDrift>(&dark.drift); s && !(s->period_hours > 0.0))
    throw DomainError("sinusoid period must be positive");
}

CountSeries simulate_campaign(const SimConfig& config)
{
  config.validate();
  const auto& proto = config.protocol;
  const auto n_intervals = static_cast<std::int64_t>(
    std::floor(config.duration_hours * 3600.0 / static_cast<double>(proto.interval_len)));

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> unit_normal(0.0, 1.0);

  const double interval_hours = static_cast<double>(proto.interval_len) / 3600.0;
  double walk_rate = std::max(config.dark.base_rate, config.dark.clamp_min);

  CountSeries series;
  series.reserve(static_cast<std::size_t>(n_intervals));
  for (std::int64_t i = 0; i < n_intervals; ++i) {
    const std::int64_t t = i * proto.interval_len;
    const bool open = (i / proto.block_len) % 2 == 0;

    double dark = config.dark.base_rate;
    if (const auto* rw = std::get_if<RandomWalkDrift>(&config.dark.drift)) {
      if (i > 0)
        walk_rate += rw->step_sd_per_hour * std::sqrt(interval_hours) * unit_normal(rng);
      walk_rate = std::max(walk_rate, config.dark.clamp_min);
      dark = walk_rate;
    } else if (const auto* s = std::get_if<SinusoidDrift>(&config.dark.drift)) {
      const double phase = 2.0 * std::numbers::pi * static_cast<double>(t) / (s->period_hours * 3600.0);
      dark = config.dark.base_rate + s->amplitude * std::sin(phase);
    }
    dark = std::max(dark, config.dark.clamp_min);

    const double rate = dark + (open ? config.light_rate : config.flash_closed_rate);
    const double expected = rate * static_cast<double>(proto.interval_len);
    std::int64_t counts = 0;
    if (expected > 0.0)
      counts = std::poisson_distribution<std::int64_t>(expected)(rng);
    series.push_back({t, open ? Shutter::Open : Shutter::Closed, counts});
  }
  return series;
}

double estimate_q(const SeriesSummary& closed_b, const SeriesSummary& closed_m)
{
  if (!(closed_b.mean > 0.0) || !(closed_m.mean > 0.0))
    throw DomainError("closed-shutter means must be positive to form q");
  return closed_b.mean / closed_m.mean;
}

} // namespace darkmeter
