#pragma once

#include "darkmeter/prior.hpp"
#include "darkmeter/protocol.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace darkmeter {

//! (n, mean, unbiased variance): all the normal likelihood needs.
struct SufficientStats
{
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;
};

SufficientStats sufficient_stats(const SeriesSummary& summary);
SufficientStats sufficient_stats(std::span<const double> samples);

//! Normal log-likelihood evaluated sample by sample.
double log_likelihood(std::span<const double> samples, double mu, double sigma_sq);
//! The same value through sufficient statistics.
double log_likelihood(const SufficientStats& stats, double mu, double sigma_sq);

inline constexpr std::size_t default_total_kept = 60000;
inline constexpr double rhat_limit = 1.01;
inline constexpr double ess_minimum = 1000.0;

struct McmcConfig
{
  std::size_t chains = 4;
  std::size_t warmup_draws = 2000;
  std::size_t kept_draws = default_total_kept / 4; //!< per chain
  std::uint64_t seed = 1;
  bool parallel = true;

  std::size_t total_kept() const { return chains * kept_draws; }
  void validate() const;

  //! Splits a total number of kept draws evenly over the chains.
  static McmcConfig with_total(std::size_t total, std::size_t chains, std::uint64_t seed);
};

struct ParamDiagnostics
{
  double rhat = 0.0;
  double ess = 0.0;
};

struct SamplerDiagnostics
{
  ParamDiagnostics mu;
  ParamDiagnostics sigma_sq;
  double sigma_sq_acceptance = 0.0; //!< Metropolis acceptance after warmup
  bool converged = false;           //!< R-hat <= 1.01 and ESS >= 1000 for both
};

//! Merged draws; chain c occupies [c * per_chain, (c + 1) * per_chain).
struct PosteriorSamples
{
  std::vector<double> mu_draws;
  std::vector<double> sigma_sq_draws;
  std::size_t chains = 0;
  SamplerDiagnostics diagnostics;
};

/*
 * Samples p(mu, sigma_sq | data) for the normal model under a
 * N(mu0, sigma0_sq) x Gamma(alpha0, beta0) prior. mu is drawn exactly from its
 * conditional; sigma_sq takes a random-walk Metropolis step on log scale whose
 * width adapts during warmup only. Each chain has its own generator seeded
 * from (seed, chain index), so the result does not depend on whether chains
 * run in parallel.
 */
PosteriorSamples sample_posterior(const SufficientStats& stats,
                                  const PriorSpec& prior,
                                  const McmcConfig& cfg);

PosteriorSamples sample_posterior(const SeriesSummary& summary,
                                  const PriorSpec& prior,
                                  const McmcConfig& cfg);

PosteriorSamples sample_posterior(const DifferenceSeries& diff,
                                  const PriorSpec& prior,
                                  const McmcConfig& cfg);

} // namespace darkmeter
