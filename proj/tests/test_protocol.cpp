#include "helpers.hpp"

#include "darkmeter/csv.hpp"
#include "darkmeter/error.hpp"
#include "darkmeter/protocol.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace darkmeter;

TEST_CASE("one block pair gives nine differences indexed 2..10")
{
  const auto series = testing::make_blocks({{0, 200, 210, 190, 205, 199, 201, 215, 185, 190},
                                            {0, 198, 205, 195, 200, 202, 196, 210, 180, 195}});
  const auto diff = build_differences(series, ShutterProtocol{});
  REQUIRE(diff.size() == 9);
  CHECK(diff.samples[0] == 2.0);
  CHECK(diff.samples[1] == 5.0);
  CHECK(diff.samples[8] == -5.0);
  for (std::size_t i = 0; i < 9; ++i) {
    CHECK(diff.pairing[i].block_pair == 0);
    CHECK(diff.pairing[i].interval == static_cast<int>(i + 2));
    CHECK(diff.pairing[i].t_closed - diff.pairing[i].t_open == 10);
  }
}

TEST_CASE("equal open and closed counts give zero differences")
{
  std::vector<std::int64_t> block{5, 7, 9, 11, 13, 15, 17, 19, 21, 23};
  const auto diff = build_differences(testing::make_blocks({block, block, block, block}), ShutterProtocol{});
  REQUIRE(diff.size() == 18);
  for (double d : diff.samples)
    CHECK(d == 0.0);
  const auto s = summarize(diff);
  CHECK(s.mean == 0.0);
  CHECK(s.variance == 0.0);
}

TEST_CASE("616 hours of one-second intervals give 997920 differences")
{
  const std::size_t intervals = 616 * 3600;
  CountSeries series(intervals);
  for (std::size_t i = 0; i < intervals; ++i)
    series[i] = {static_cast<std::int64_t>(i), (i / 10) % 2 == 0 ? Shutter::Open : Shutter::Closed, 200};
  CHECK(build_differences(series, ShutterProtocol{}).size() == 997920);
}

TEST_CASE("keeping the first interval uses the whole block")
{
  std::vector<std::int64_t> block(10, 3);
  ShutterProtocol p;
  p.discard_first = false;
  const auto diff = build_differences(testing::make_blocks({block, block}), p);
  CHECK(diff.size() == 10);
  CHECK(diff.pairing.front().interval == 1);
}

TEST_CASE("interval length converts counts to rates")
{
  std::vector<std::int64_t> open(10, 50);
  std::vector<std::int64_t> closed(10, 40);
  ShutterProtocol p;
  p.interval_len = 5;
  const auto diff = build_differences(testing::make_blocks({open, closed}, 5), p);
  REQUIRE(diff.size() == 9);
  CHECK(diff.samples[0] == testing::near(2.0));
  CHECK(diff.campaign_end == 100);
}

TEST_CASE("a closed block first is still paired open minus closed")
{
  auto series = testing::make_blocks({std::vector<std::int64_t>(10, 4), std::vector<std::int64_t>(10, 9)});
  for (auto& iv : series)
    iv.shutter = iv.shutter == Shutter::Open ? Shutter::Closed : Shutter::Open;
  const auto diff = build_differences(series, ShutterProtocol{});
  CHECK(diff.samples[0] == 5.0);
}

TEST_CASE("a trailing partial pair is dropped")
{
  std::vector<std::int64_t> b(10, 1);
  auto series = testing::make_blocks({b, b, b});
  series.push_back({30, Shutter::Closed, 1});
  CHECK(build_differences(series, ShutterProtocol{}).size() == 9);
}

TEST_CASE("structural errors")
{
  std::vector<std::int64_t> b(10, 1);

  SUBCASE("gap in time")
  {
    auto s = testing::make_blocks({b, b});
    for (std::size_t i = 7; i < s.size(); ++i)
      s[i].t_start += 1;
    try {
      build_differences(s, ShutterProtocol{});
      FAIL("expected StructureError");
    } catch (const StructureError& e) {
      CHECK(e.row() == 7);
    }
  }
  SUBCASE("short block in the middle")
  {
    std::vector<std::int64_t> shortb(9, 1);
    CHECK_THROWS_AS(build_differences(testing::make_blocks({shortb, b, b}), ShutterProtocol{}), StructureError);
  }
  SUBCASE("block too long")
  {
    std::vector<std::int64_t> longb(11, 1);
    CHECK_THROWS_AS(build_differences(testing::make_blocks({longb, b}), ShutterProtocol{}), StructureError);
  }
  SUBCASE("negative counts")
  {
    auto s = testing::make_blocks({b, b});
    s[3].counts = -1;
    CHECK_THROWS_AS(build_differences(s, ShutterProtocol{}), StructureError);
  }
  SUBCASE("no complete pair")
  {
    CHECK_THROWS_AS(build_differences(testing::make_blocks({b}), ShutterProtocol{}), EmptyResultError);
    CHECK_THROWS_AS(build_differences(CountSeries{}, ShutterProtocol{}), EmptyResultError);
  }
  SUBCASE("bad protocol")
  {
    ShutterProtocol p;
    p.block_len = 1;
    CHECK_THROWS_AS(build_differences(testing::make_blocks({b, b}), p), DomainError);
  }
}

TEST_CASE("summary of {-1, 0, 1}")
{
  DifferenceSeries d;
  d.samples = {-1.0, 0.0, 1.0};
  d.pairing = {{0, 2, 0, 10}, {0, 3, 1, 11}, {0, 4, 2, 12}};
  d.campaign_end = 20;
  const auto s = summarize(d);
  CHECK(s.mean == 0.0);
  CHECK(s.variance == testing::near(1.0));
  CHECK(s.n == 3);
  REQUIRE(s.hourly.size() == 1);
  CHECK(s.hourly[0].partial);
}

TEST_CASE("summary needs two samples")
{
  DifferenceSeries d;
  d.samples = {1.0};
  d.pairing = {{0, 2, 0, 10}};
  CHECK_THROWS_AS(summarize(d), InsufficientDataError);
}

TEST_CASE("hourly moments pool back to the global moments")
{
  std::mt19937_64 rng(11);
  std::poisson_distribution<std::int64_t> pois(200.0);
  const std::size_t intervals = 3 * 3600 + 1800;
  CountSeries series(intervals);
  for (std::size_t i = 0; i < intervals; ++i)
    series[i] = {static_cast<std::int64_t>(i), (i / 10) % 2 == 0 ? Shutter::Open : Shutter::Closed, pois(rng)};
  const auto s = summarize(build_differences(series, ShutterProtocol{}));
  REQUIRE(s.hourly.size() == 4);
  CHECK_FALSE(s.hourly[0].partial);
  CHECK(s.hourly[3].partial);
  CHECK(s.hourly[0].n == 1620);
  const auto pooled = combine_hourly(s.hourly);
  CHECK(pooled.n == s.n);
  CHECK(std::abs(pooled.mean - s.mean) < 1e-12 * std::sqrt(s.variance));
  CHECK(pooled.variance == testing::near(s.variance).epsilon(1e-12));
}

TEST_CASE("state summaries and published statistics")
{
  const auto series = testing::make_blocks({{1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, {2, 2, 2, 2, 2, 2, 2, 2, 2, 2}});
  const auto closed = summarize_counts(series, Shutter::Closed);
  CHECK(closed.mean == 2.0);
  CHECK(closed.variance == 0.0);
  const auto open = summarize_counts(series, Shutter::Open);
  CHECK(open.mean == testing::near(5.5));

  const auto pub = summary_from_stats(-4.14e-3, 445.21, 997920);
  CHECK(pub.n == 997920);
  CHECK(pub.hourly.empty());
  CHECK_THROWS_AS(summary_from_stats(0.0, -1.0, 10), DomainError);
}

TEST_CASE("count CSV round trip and errors")
{
  const auto series = testing::make_blocks({{0, 1, 2, 3, 4, 5, 6, 7, 8, 9}, {9, 8, 7, 6, 5, 4, 3, 2, 1, 0}});
  std::stringstream ss;
  write_count_csv(ss, series);
  CHECK(read_count_csv(ss) == series);

  auto expect_line = [](const std::string& text, std::size_t line, const std::string& field) {
    std::istringstream in(text);
    try {
      read_count_csv(in);
      FAIL("expected InputError");
    } catch (const InputError& e) {
      CHECK(e.line() == line);
      CHECK(e.field() == field);
    }
  };
  expect_line("t_start_s,shutter,counts\n0,O,1\n1,X,2\n", 3, "shutter");
  expect_line("t_start_s,shutter,counts\n0,O,abc\n", 2, "counts");
  expect_line("t_start_s,shutter,counts\n0,O,-3\n", 2, "counts");
  expect_line("t_start_s,shutter,counts\n0.5,O,3\n", 2, "t_start_s");
  expect_line("time,shutter,counts\n0,O,3\n", 1, "");
}

TEST_CASE("delta CSV")
{
  DifferenceSeries d;
  d.samples = {0.1, -2.0};
  std::ostringstream out;
  write_delta_csv(out, d);
  CHECK(out.str() == "delta_cnt_per_s\n0.1\n-2\n");
}
