#pragma once

#include "darkmeter/protocol.hpp"

#include <cstdint>
#include <variant>

namespace darkmeter {

struct NoDrift
{};

//! Gaussian increments on the dark rate, sd given per hour of elapsed time.
struct RandomWalkDrift
{
  double step_sd_per_hour = 0.0;
};

struct SinusoidDrift
{
  double amplitude = 0.0; //!< counts/s
  double period_hours = 1.0;
};

using Drift = std::variant<NoDrift, RandomWalkDrift, SinusoidDrift>;

struct DarkRateModel
{
  double base_rate = 200.0; //!< counts/s
  Drift drift = NoDrift{};
  double clamp_min = 0.0;   //!< lower bound on the instantaneous rate
};

struct SimConfig
{
  DarkRateModel dark;
  double light_rate = 0.0;        //!< counts/s, added while open
  double flash_closed_rate = 0.0; //!< counts/s, added while closed
  double duration_hours = 1.0;
  ShutterProtocol protocol;
  std::uint64_t seed = 1;

  //! Throws DomainError on negative rates, non-positive duration or a bad protocol.
  void validate() const;
};

/*
 * Draws a shuttered campaign starting with an open block at t = 0. Each
 * interval's count is Poisson with the rate frozen at the interval start:
 * dark rate + light (open) or + reflected-flash rate (closed).
 * Same config and seed give a bit-identical series.
 */
CountSeries simulate_campaign(const SimConfig& config);

//! Ratio of mean closed-shutter count rates, black over metallic side.
double estimate_q(const SeriesSummary& closed_b, const SeriesSummary& closed_m);

} // namespace darkmeter
