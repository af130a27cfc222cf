#include "darkmeter/diagnostics.hpp"

#include "darkmeter/error.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace darkmeter {

namespace {

struct SplitChains
{
  std::vector<std::span<const double>> parts;
  std::size_t len = 0;
  std::vector<double> means;
  std::vector<double> vars;
  double within = 0.0;   // W
  double var_plus = 0.0; // (N-1)/N W + B/N
};

SplitChains split(std::span<const double> draws, std::size_t chains)
{
  if (chains == 0 || draws.size() % chains != 0)
    throw DomainError("draws must divide evenly into chains");
  const std::size_t per_chain = draws.size() / chains;
  if (per_chain < 4)
    throw InsufficientDataError("diagnostics need at least 4 draws per chain");

  SplitChains s;
  s.len = per_chain / 2;
  for (std::size_t c = 0; c < chains; ++c) {
    const auto chain = draws.subspan(c * per_chain, per_chain);
    s.parts.push_back(chain.subspan(0, s.len));
    s.parts.push_back(chain.subspan(per_chain - s.len, s.len));
  }
  const auto n = static_cast<double>(s.len);
  for (auto part : s.parts) {
    double mean = 0.0;
    for (double x : part)
      mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : part)
      ss += (x - mean) * (x - mean);
    s.means.push_back(mean);
    s.vars.push_back(ss / (n - 1.0));
  }
  const auto m = static_cast<double>(s.parts.size());
  double grand = 0.0;
  for (double mu : s.means)
    grand += mu;
  grand /= m;
  double between_over_n = 0.0;
  for (double mu : s.means)
    between_over_n += (mu - grand) * (mu - grand);
  between_over_n /= (m - 1.0);
  for (double v : s.vars)
    s.within += v;
  s.within /= m;
  s.var_plus = (n - 1.0) / n * s.within + between_over_n;
  return s;
}

} // namespace

double split_rhat(std::span<const double> draws, std::size_t chains)
{
  const auto s = split(draws, chains);
  if (s.within <= 0.0)
    return s.var_plus <= 0.0 ? 1.0 : INFINITY;
  return std::sqrt(s.var_plus / s.within);
}

double effective_sample_size(std::span<const double> draws, std::size_t chains)
{
  const auto s = split(draws, chains);
  const auto n = s.len;
  const auto total = static_cast<double>(n * s.parts.size());
  if (s.var_plus <= 0.0)
    return total;

  // biased autocovariance (divide by n), averaged over split chains
  auto mean_acov = [&](std::size_t lag) {
    double acc = 0.0;
    for (std::size_t p = 0; p < s.parts.size(); ++p) {
      const auto part = s.parts[p];
      const double mu = s.means[p];
      double sum = 0.0;
      for (std::size_t i = 0; i + lag < n; ++i)
        sum += (part[i] - mu) * (part[i + lag] - mu);
      acc += sum / static_cast<double>(n);
    }
    return acc / static_cast<double>(s.parts.size());
  };
  auto rho = [&](std::size_t lag) {
    return lag == 0 ? 1.0 : 1.0 - (s.within - mean_acov(lag)) / s.var_plus;
  };

  double tau = -1.0;
  double prev_pair = INFINITY;
  for (std::size_t lag = 0; lag + 1 < n; lag += 2) {
    double pair = rho(lag) + rho(lag + 1);
    if (pair <= 0.0)
      break;
    pair = std::min(pair, prev_pair);
    prev_pair = pair;
    tau += 2.0 * pair;
  }
  tau = std::max(tau, 1.0 / std::log10(total));
  return total / tau;
}

} // namespace darkmeter
