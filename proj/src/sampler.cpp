#include "darkmeter/sampler.hpp"

#include "darkmeter/diagnostics.hpp"
#include "darkmeter/error.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <thread>

namespace darkmeter {

namespace {

constexpr double target_acceptance = 0.44;

struct ChainOutput
{
  std::vector<double> mu;
  std::vector<double> sigma_sq;
  std::size_t accepted = 0;
};

std::mt19937_64 chain_rng(std::uint64_t seed, std::size_t chain)
{
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chain),
                    0x9e3779b9u};
  return std::mt19937_64(seq);
}

ChainOutput run_chain(const SufficientStats& stats,
                      const PriorSpec& prior,
                      const McmcConfig& cfg,
                      std::size_t chain)
{
  auto rng = chain_rng(cfg.seed, chain);
  std::normal_distribution<double> z(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  const auto n = static_cast<double>(stats.n);
  const double xbar = stats.mean;
  const double ss_within = (n - 1.0) * stats.variance;
  const double prior_prec = 1.0 / prior.sigma0_sq;

  // Rough Gaussian picture of the posterior, used only to start chains and
  // to size the first proposal.
  const double v_hat = stats.variance;
  const double mu_prec = prior_prec + n / v_hat;
  const double mu_center = (prior.mu0 * prior_prec + n * xbar / v_hat) / mu_prec;
  const double s2_sd =
    1.0 / std::sqrt(n / (2.0 * v_hat * v_hat) + prior.beta0 * prior.beta0 / prior.alpha0);

  double mu = mu_center + 2.0 * z(rng) / std::sqrt(mu_prec);
  double s2 = v_hat + 2.0 * s2_sd * z(rng);
  if (!(s2 > 0.0))
    s2 = v_hat;
  double log_s2 = std::log(s2);
  double log_step = std::log(2.4 * s2_sd / v_hat);

  auto log_target = [&](double ls, double ss) {
    // Gamma prior and likelihood in sigma_sq, plus the log-scale Jacobian
    return (prior.alpha0 - 0.5 * n) * ls - 0.5 * ss * std::exp(-ls) - prior.beta0 * std::exp(ls);
  };

  ChainOutput out;
  out.mu.reserve(cfg.kept_draws);
  out.sigma_sq.reserve(cfg.kept_draws);

  const std::size_t total = cfg.warmup_draws + cfg.kept_draws;
  for (std::size_t it = 0; it < total; ++it) {
    const double prec = prior_prec + n / s2;
    const double mean = (prior.mu0 * prior_prec + n * xbar / s2) / prec;
    mu = mean + z(rng) / std::sqrt(prec);

    const double ss = ss_within + n * (xbar - mu) * (xbar - mu);
    const double proposal = log_s2 + std::exp(log_step) * z(rng);
    const double log_ratio = log_target(proposal, ss) - log_target(log_s2, ss);
    const bool accept = std::log(u(rng)) < log_ratio;
    if (accept) {
      log_s2 = proposal;
      s2 = std::exp(log_s2);
    }

    if (it < cfg.warmup_draws) {
      const double gain = 1.0 / std::pow(static_cast<double>(it) + 1.0, 0.6);
      log_step += gain * ((accept ? 1.0 : 0.0) - target_acceptance);
    } else {
      out.accepted += accept ? 1 : 0;
      out.mu.push_back(mu);
      out.sigma_sq.push_back(s2);
    }
  }
  return out;
}

} // namespace

SufficientStats sufficient_stats(const SeriesSummary& summary)
{
  return {summary.n, summary.mean, summary.variance};
}

SufficientStats sufficient_stats(std::span<const double> samples)
{
  if (samples.size() < 2)
    throw InsufficientDataError("sufficient statistics need at least two samples");
  const auto n = static_cast<double>(samples.size());
  double mean = 0.0;
  for (double x : samples)
    mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : samples)
    ss += (x - mean) * (x - mean);
  return {samples.size(), mean, ss / (n - 1.0)};
}

double log_likelihood(std::span<const double> samples, double mu, double sigma_sq)
{
  double ss = 0.0;
  for (double x : samples)
    ss += (x - mu) * (x - mu);
  const auto n = static_cast<double>(samples.size());
  return -0.5 * n * std::log(2.0 * std::numbers::pi * sigma_sq) - 0.5 * ss / sigma_sq;
}

double log_likelihood(const SufficientStats& stats, double mu, double sigma_sq)
{
  const auto n = static_cast<double>(stats.n);
  const double ss = (n - 1.0) * stats.variance + n * (stats.mean - mu) * (stats.mean - mu);
  return -0.5 * n * std::log(2.0 * std::numbers::pi * sigma_sq) - 0.5 * ss / sigma_sq;
}

void McmcConfig::validate() const
{
  if (chains < 2)
    throw DomainError("at least two chains are required for convergence diagnostics");
  if (kept_draws < 4)
    throw DomainError("at least four kept draws per chain are required");
}

McmcConfig McmcConfig::with_total(std::size_t total, std::size_t chains, std::uint64_t seed)
{
  if (chains == 0 || total % chains != 0)
    throw DomainError("total kept draws must be a multiple of the chain count");
  McmcConfig cfg;
  cfg.chains = chains;
  cfg.kept_draws = total / chains;
  cfg.seed = seed;
  return cfg;
}

PosteriorSamples sample_posterior(const SufficientStats& stats,
                                  const PriorSpec& prior,
                                  const McmcConfig& cfg)
{
  prior.validate();
  cfg.validate();
  if (stats.n < 2)
    throw InsufficientDataError("posterior sampling needs n >= 2");
  if (!(stats.variance > 0.0))
    throw DomainError("posterior sampling needs a positive sample variance");

  std::vector<ChainOutput> outputs(cfg.chains);
  if (cfg.parallel) {
    std::vector<std::jthread> workers;
    for (std::size_t c = 0; c < cfg.chains; ++c)
      workers.emplace_back([&, c] { outputs[c] = run_chain(stats, prior, cfg, c); });
  } else {
    for (std::size_t c = 0; c < cfg.chains; ++c)
      outputs[c] = run_chain(stats, prior, cfg, c);
  }

  PosteriorSamples out;
  out.chains = cfg.chains;
  out.mu_draws.reserve(cfg.total_kept());
  out.sigma_sq_draws.reserve(cfg.total_kept());
  std::size_t accepted = 0;
  for (const auto& chain : outputs) {
    out.mu_draws.insert(out.mu_draws.end(), chain.mu.begin(), chain.mu.end());
    out.sigma_sq_draws.insert(out.sigma_sq_draws.end(), chain.sigma_sq.begin(), chain.sigma_sq.end());
    accepted += chain.accepted;
  }

  auto& d = out.diagnostics;
  d.mu = {split_rhat(out.mu_draws, cfg.chains), effective_sample_size(out.mu_draws, cfg.chains)};
  d.sigma_sq = {split_rhat(out.sigma_sq_draws, cfg.chains),
                effective_sample_size(out.sigma_sq_draws, cfg.chains)};
  d.sigma_sq_acceptance = static_cast<double>(accepted) / static_cast<double>(cfg.total_kept());
  d.converged = d.mu.rhat <= rhat_limit && d.sigma_sq.rhat <= rhat_limit &&
                d.mu.ess >= ess_minimum && d.sigma_sq.ess >= ess_minimum;
  return out;
}

PosteriorSamples sample_posterior(const SeriesSummary& summary,
                                  const PriorSpec& prior,
                                  const McmcConfig& cfg)
{
  return sample_posterior(sufficient_stats(summary), prior, cfg);
}

PosteriorSamples sample_posterior(const DifferenceSeries& diff,
                                  const PriorSpec& prior,
                                  const McmcConfig& cfg)
{
  return sample_posterior(sufficient_stats(diff.samples), prior, cfg);
}

} // namespace darkmeter
