#include "helpers.hpp"
#include "oracles/conjugate.hpp"
#include "oracles/truncated_normal.hpp"

#include "darkmeter/density.hpp"
#include "darkmeter/diagnostics.hpp"
#include "darkmeter/error.hpp"
#include "darkmeter/evidence.hpp"
#include "darkmeter/intervals.hpp"
#include "darkmeter/prior.hpp"
#include "darkmeter/sampler.hpp"
#include "darkmeter/sweep.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace darkmeter;

namespace {

std::vector<double> normal_draws(std::size_t n, double mean, double sd, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(mean, sd);
  std::vector<double> out(n);
  for (auto& x : out)
    x = d(rng);
  return out;
}

const SeriesSummary black_shutter_stats = summary_from_stats(-4.14e-3, 445.21, 997920);

} // namespace

TEST_SUITE("prior")
{
  TEST_CASE("black-shutter campaign statistics at f = 10")
  {
    const auto p = derive_priors(black_shutter_stats, 10.0, 10.0);
    CHECK(p.mu0 == 0.0);
    CHECK(p.sigma0_sq == testing::near(10.0 * 445.21 / 997920.0));
    CHECK(p.sigma0_sq == testing::near(4.461e-3).epsilon(1e-3));
  }

  TEST_CASE("direct substitution")
  {
    const auto p = derive_priors(summary_from_stats(0.5, 2.0, 8), 1.0, 1.0);
    CHECK(p.mu0 == 0.5);
    CHECK(p.sigma0_sq == testing::near(0.25));
    CHECK(p.beta0 == testing::near(2.0));
    CHECK(p.alpha0 == testing::near(4.0));
  }

  TEST_CASE("degenerate and invalid inputs")
  {
    CHECK_THROWS_AS(derive_priors(summary_from_stats(0.0, 0.0, 10), 1.0, 1.0), DegeneratePriorError);
    CHECK_THROWS_AS(derive_priors(black_shutter_stats, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(derive_priors(black_shutter_stats, 1.0, -2.0), DomainError);
  }

  TEST_CASE("mean density, full and truncated")
  {
    PriorSpec p;
    p.sigma0_sq = 4.0;
    CHECK(prior_mu_density(p, 0.0, Side::TwoSided) == testing::near(oracle::normal_pdf(0.0, 0.0, 2.0)));
    CHECK(prior_mu_density(p, 0.0, Side::PositiveOnly) == testing::near(2.0 * oracle::normal_pdf(0.0, 0.0, 2.0)));
    p.mu0 = 1.0;
    CHECK(prior_mu_density(p, 0.0, Side::PositiveOnly) ==
          testing::near(oracle::normal_pdf(0.0, 1.0, 2.0) / (1.0 - oracle::normal_cdf(0.0, 1.0, 2.0))));
  }
}

TEST_SUITE("sampler")
{
  TEST_CASE("sufficient statistics give the same likelihood as the samples")
  {
    const auto x = normal_draws(500, 1.0, 3.0, 1);
    const auto stats = sufficient_stats(x);
    for (double mu : {-1.0, 0.0, 2.5})
      for (double s2 : {1.0, 9.0, 20.0})
        CHECK(log_likelihood(stats, mu, s2) == testing::near(log_likelihood(x, mu, s2)).epsilon(1e-10));
  }

  TEST_CASE("huge f matches the known-variance posterior")
  {
    const auto x = normal_draws(100000, 0.3, 20.0, 2);
    const auto stats = sufficient_stats(x);
    const auto summary = summary_from_stats(stats.mean, stats.variance, stats.n);
    const auto prior = derive_priors(summary, 1e6, 1e6);
    McmcConfig cfg;
    cfg.seed = 3;
    const auto post = sample_posterior(summary, prior, cfg);
    REQUIRE(post.diagnostics.converged);
    const auto ref = oracle::known_variance_posterior(prior.mu0, prior.sigma0_sq, stats.mean, stats.variance, stats.n);

    double mean = 0.0;
    for (double m : post.mu_draws)
      mean += m;
    mean /= static_cast<double>(post.mu_draws.size());
    double ss = 0.0;
    for (double m : post.mu_draws)
      ss += (m - mean) * (m - mean);
    const double sd = std::sqrt(ss / static_cast<double>(post.mu_draws.size() - 1));
    const double ess = post.diagnostics.mu.ess;
    CHECK(std::abs(mean - ref.mean) < 3.0 * ref.sd / std::sqrt(ess));
    CHECK(std::abs(sd - ref.sd) < 3.0 * ref.sd / std::sqrt(2.0 * ess));
  }

  TEST_CASE("a tight prior pulls the mean toward mu0")
  {
    const auto summary = summary_from_stats(2.0, 100.0, 1000);
    McmcConfig cfg;
    const auto loose = sample_posterior(summary, derive_priors(summary, 1e4, 1.0), cfg);
    PriorSpec tight = derive_priors(summary, 1e-4, 1.0);
    tight.mu0 = 0.0;
    const auto pulled = sample_posterior(summary, tight, cfg);
    auto mean = [](const std::vector<double>& v) {
      double s = 0.0;
      for (double x : v)
        s += x;
      return s / static_cast<double>(v.size());
    };
    CHECK(mean(loose.mu_draws) == testing::near(2.0).epsilon(0.05));
    CHECK(std::abs(mean(pulled.mu_draws)) < 0.05);
  }

  TEST_CASE("parallel and serial chains give identical draws")
  {
    McmcConfig cfg;
    cfg.kept_draws = 2000;
    cfg.seed = 99;
    const auto prior = derive_priors(black_shutter_stats, 10.0, 10.0);
    const auto a = sample_posterior(black_shutter_stats, prior, cfg);
    cfg.parallel = false;
    const auto b = sample_posterior(black_shutter_stats, prior, cfg);
    CHECK(a.mu_draws == b.mu_draws);
    CHECK(a.sigma_sq_draws == b.sigma_sq_draws);
  }

  TEST_CASE("acceptance lands near the adaptation target")
  {
    const auto prior = derive_priors(black_shutter_stats, 10.0, 10.0);
    const auto post = sample_posterior(black_shutter_stats, prior, McmcConfig{});
    CHECK(post.diagnostics.sigma_sq_acceptance == testing::near(0.44).epsilon(0.25));
    CHECK(post.mu_draws.size() == default_total_kept);
  }

  TEST_CASE("too few draws are flagged, not summarized")
  {
    McmcConfig cfg;
    cfg.warmup_draws = 0;
    cfg.kept_draws = 20;
    const auto prior = derive_priors(black_shutter_stats, 10.0, 10.0);
    const auto post = sample_posterior(black_shutter_stats, prior, cfg);
    CHECK_FALSE(post.diagnostics.converged);
    CHECK_THROWS_AS(summarize_posterior(post, prior), ConvergenceError);
  }

  TEST_CASE("configuration errors")
  {
    const auto prior = derive_priors(black_shutter_stats, 10.0, 10.0);
    McmcConfig cfg;
    cfg.chains = 1;
    CHECK_THROWS_AS(sample_posterior(black_shutter_stats, prior, cfg), DomainError);
    CHECK_THROWS_AS(McmcConfig::with_total(60001, 4, 1), DomainError);
    CHECK(McmcConfig::with_total(60000, 4, 1).kept_draws == 15000);
    CHECK_THROWS_AS(sample_posterior(summary_from_stats(0.0, 1.0, 1000), PriorSpec{0.0, -1.0}, McmcConfig{}),
                    DegeneratePriorError);
  }
}

TEST_SUITE("diagnostics")
{
  TEST_CASE("independent chains from one distribution")
  {
    const auto x = normal_draws(40000, 0.0, 1.0, 4);
    CHECK(split_rhat(x, 4) == testing::near(1.0).epsilon(0.01));
    CHECK(effective_sample_size(x, 4) == testing::near(40000.0).epsilon(0.1));
  }

  TEST_CASE("shifted chain inflates R-hat")
  {
    auto x = normal_draws(40000, 0.0, 1.0, 5);
    for (std::size_t i = 0; i < 10000; ++i)
      x[i] += 1.0;
    CHECK(split_rhat(x, 4) > 1.1);
  }

  TEST_CASE("AR(1) chains: ESS near n (1 - phi) / (1 + phi)")
  {
    const double phi = 0.8;
    std::mt19937_64 rng(6);
    std::normal_distribution<double> z(0.0, 1.0);
    const std::size_t per = 50000;
    std::vector<double> x;
    for (int c = 0; c < 4; ++c) {
      double v = z(rng) / std::sqrt(1.0 - phi * phi);
      for (std::size_t i = 0; i < per; ++i) {
        v = phi * v + z(rng);
        x.push_back(v);
      }
    }
    const double expected = 4.0 * per * (1.0 - phi) / (1.0 + phi);
    CHECK(effective_sample_size(x, 4) == testing::near(expected).epsilon(0.15));
  }

  TEST_CASE("chain layout errors")
  {
    std::vector<double> x(10, 1.0);
    CHECK_THROWS_AS(split_rhat(x, 3), DomainError);
    CHECK_THROWS_AS(split_rhat(x, 5), InsufficientDataError);
  }
}

TEST_SUITE("intervals")
{
  TEST_CASE("standard normal HDI")
  {
    const auto x = normal_draws(1000000, 0.0, 1.0, 7);
    const auto i = hdi(x, 0.95);
    CHECK(i.lo == testing::near(-1.96).epsilon(0.01));
    CHECK(i.hi == testing::near(1.96).epsilon(0.01));
  }

  TEST_CASE("constant draws collapse the interval")
  {
    std::vector<double> x(5000, 3.25);
    const auto i = hdi(x, 0.95);
    CHECK(i.lo == 3.25);
    CHECK(i.hi == 3.25);
  }

  TEST_CASE("skewed draws: the HDI is shorter than the central interval")
  {
    std::mt19937_64 rng(8);
    std::exponential_distribution<double> e(1.0);
    std::vector<double> x(200000);
    for (auto& v : x)
      v = e(rng);
    const auto i = hdi(x, 0.9);
    CHECK(std::abs(i.lo) < 1e-3);
    CHECK(i.hi == testing::near(std::log(10.0)).epsilon(0.02));
  }

  TEST_CASE("argument checks")
  {
    std::vector<double> few(999, 0.0);
    CHECK_THROWS_AS(hdi(few, 0.95), InsufficientDataError);
    std::vector<double> many(2000, 0.0);
    CHECK_THROWS_AS(hdi(many, 1.0), DomainError);
    CHECK_THROWS_AS(hdi(many, 0.0), DomainError);
    CHECK(shortest_window(few, 0.95).hi == 0.0);
  }

  TEST_CASE("positive part and pd+")
  {
    const auto x = normal_draws(400000, 0.0, 1.0, 9);
    CHECK(pd_plus(x) == testing::near(0.5).epsilon(0.01));
    std::vector<double> sym;
    for (double v : normal_draws(50000, 0.0, 2.0, 10)) {
      sym.push_back(v);
      sym.push_back(-v);
    }
    CHECK(pd_plus(sym) == 0.5);

    std::vector<double> mixed;
    for (int i = 0; i < 250; ++i)
      mixed.insert(mixed.end(), {-1.0, 0.0, 2.0, 3.0});
    const auto pos = positive_part(mixed);
    CHECK(pos.draws.size() == 750);
    CHECK(std::count(pos.draws.begin(), pos.draws.end(), 0.0) == 250);
    CHECK(pos.retained_fraction == 0.75);
    CHECK_FALSE(pos.empty);
    CHECK(pd_plus(mixed) == 0.5);
    CHECK(positive_part(std::vector<double>(1000, -1.0)).empty);
    CHECK_THROWS_AS(pd_plus(std::vector<double>{1.0, 2.0}), InsufficientDataError);
  }
}

TEST_SUITE("density")
{
  TEST_CASE("standard normal at 0")
  {
    const auto x = normal_draws(60000, 0.0, 1.0, 11);
    CHECK(density_at(x, 0.0, Support::Full).value == testing::near(0.3989).epsilon(0.05));
  }

  TEST_CASE("half-normal at the boundary")
  {
    auto x = normal_draws(60000, 0.0, 1.0, 12);
    for (auto& v : x)
      v = std::abs(v);
    CHECK(density_at(x, 0.0, Support::NonNegative).value == testing::near(0.7979).epsilon(0.07));
    // without reflection roughly half the mass is lost at the edge
    CHECK(density_at(x, 0.0, Support::Full).value < 0.5);
  }

  TEST_CASE("uniform at the centre")
  {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> x(60000);
    for (auto& v : x)
      v = u(rng);
    CHECK(density_at(x, 0.5, Support::Full).value == testing::near(1.0).epsilon(0.05));
  }

  TEST_CASE("bandwidth and edge cases")
  {
    const auto x = normal_draws(10000, 0.0, 1.0, 14);
    CHECK(silverman_bandwidth(x) == testing::near(0.9 * std::pow(10000.0, -0.2)).epsilon(0.05));
    CHECK(density_at(x, -1.0, Support::NonNegative).value == 0.0);
    CHECK(density_at(x, 10.0, Support::Full).extrapolated);
    std::vector<double> neg(2000, -1.0);
    neg[0] = 0.5;
    CHECK_THROWS_AS(density_at(neg, 0.0, Support::NonNegative), EmptyResultError);
    CHECK_THROWS_AS(density_at(std::vector<double>(10, 1.0), 0.0, Support::Full), InsufficientDataError);
  }
}

TEST_SUITE("savage-dickey")
{
  TEST_CASE("posterior equal to the prior gives ratio 1")
  {
    PriorSpec p;
    p.sigma0_sq = 0.25;
    const auto x = normal_draws(60000, 0.0, 0.5, 15);
    CHECK(savage_dickey(x, p, Side::TwoSided).ratio == testing::near(1.0).epsilon(0.03));
    CHECK(savage_dickey(x, p, Side::PositiveOnly).ratio == testing::near(1.0).epsilon(0.05));
  }

  TEST_CASE("truncated-Gaussian closed form at campaign scale")
  {
    const double f = 0.707 * 997920;
    const auto prior = derive_priors(black_shutter_stats, f, f);
    const double post_mean = -4.19e-3;
    const double post_sd = 0.021;
    const double expected = oracle::truncated_pdf_at_zero(post_mean, post_sd) /
                            (2.0 * oracle::normal_pdf(0.0, 0.0, std::sqrt(prior.sigma0_sq)));
    CHECK(expected == testing::near(1011.0).epsilon(0.10));
    const auto x = normal_draws(60000, post_mean, post_sd, 16);
    CHECK(savage_dickey(x, prior, Side::PositiveOnly).ratio == testing::near(expected).epsilon(0.05));
  }

  TEST_CASE("a posterior far from zero vanishes")
  {
    PriorSpec p;
    const auto x = normal_draws(5000, 50.0, 1.0, 17);
    const auto r = savage_dickey(x, p, Side::TwoSided);
    CHECK(r.posterior_vanishes);
    CHECK(r.ratio == 0.0);
    CHECK(std::isinf(r.bf10()));
    const auto neg = normal_draws(5000, -50.0, 1.0, 18);
    CHECK(savage_dickey(neg, p, Side::PositiveOnly).posterior_vanishes);
  }
}

TEST_SUITE("summary and sweep")
{
  TEST_CASE("summary of the campaign-scale posterior")
  {
    const auto prior = derive_priors(black_shutter_stats, 10.0, 10.0);
    const auto s = summarize_posterior(sample_posterior(black_shutter_stats, prior, McmcConfig{}), prior);
    CHECK(s.f == 10.0);
    CHECK(s.hdi_full.contains(0.0));
    CHECK(s.hdi_pos.lo >= 0.0);
    CHECK(s.pd_plus == s.positive_fraction);
    CHECK(s.warnings.empty());
  }

  TEST_CASE("all-negative posterior reports an empty positive part")
  {
    const auto stats = summary_from_stats(-5.0, 1.0, 1000);
    const auto prior = derive_priors(stats, 10.0, 10.0);
    const auto s = summarize_posterior(sample_posterior(stats, prior, McmcConfig{}), prior);
    CHECK(s.pd_plus == 0.0);
    CHECK(s.hdi_pos.hi == 0.0);
    CHECK_FALSE(s.warnings.empty());
  }

  TEST_CASE("exact power law")
  {
    std::vector<PowerLawPoint> pts;
    for (double f : {1.0, 10.0, 100.0, 1000.0, 1e4})
      pts.push_back({f, 2.0 * std::sqrt(f)});
    const auto fit = powerlaw_fit(pts, 1.0);
    CHECK(fit.a == testing::near(2.0).epsilon(1e-12));
    CHECK(fit.b == testing::near(0.5).epsilon(1e-12));
    CHECK(fit.rms_log_residual < 1e-12);
    CHECK(powerlaw_fit(pts, 10.0).points == 4);
  }

  TEST_CASE("constant r gives b = 0")
  {
    std::vector<PowerLawPoint> pts{{10.0, 3.0}, {100.0, 3.0}, {1000.0, 3.0}};
    const auto fit = powerlaw_fit(pts);
    CHECK(std::abs(fit.b) < 1e-12);
    CHECK(fit.a == testing::near(3.0));
  }

  TEST_CASE("fit errors")
  {
    std::vector<PowerLawPoint> two{{10.0, 1.0}, {100.0, 2.0}};
    CHECK_THROWS_AS(powerlaw_fit(two), InsufficientDataError);
    std::vector<PowerLawPoint> bad{{10.0, 1.0}, {100.0, -2.0}, {1000.0, 3.0}};
    CHECK_THROWS_AS(powerlaw_fit(bad), DomainError);
  }

  TEST_CASE("sweep follows the conjugate shrinkage and is flat for large f")
  {
    const auto stats = sufficient_stats(black_shutter_stats);
    const std::vector<double> grid{10.0, 100.0, 1000.0};
    const auto rows = sensitivity_sweep(stats, grid, McmcConfig{});
    REQUIRE(rows.size() == 3);
    const double se = std::sqrt(stats.variance / static_cast<double>(stats.n));
    for (const auto& r : rows) {
      const double shrink = r.f / (r.f + 1.0);
      CHECK(r.sd == testing::near(se * std::sqrt(shrink)).epsilon(0.02));
      CHECK(std::abs(r.mean - stats.mean * shrink) < 0.05 * se);
    }
    CHECK(rows[1].sd == testing::near(rows[2].sd).epsilon(0.01));
    CHECK(rows[0].sd_ratio_pos < rows[1].sd_ratio_pos);
    CHECK(rows[1].sd_ratio_pos < rows[2].sd_ratio_pos);
    const std::vector<double> unsorted{100.0, 10.0};
    CHECK_THROWS_AS(sensitivity_sweep(stats, unsorted, McmcConfig{}), DomainError);
  }
}
