#include "darkmeter/protocol.hpp"

#include "darkmeter/error.hpp"

#include <cmath>
#include <string>

namespace darkmeter {

namespace {

constexpr std::int64_t seconds_per_hour = 3600;

const char* state_name(Shutter s)
{
  return s == Shutter::Open ? "open" : "closed";
}

struct Accumulator
{
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x)
  {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
};

// Values must be ordered by time.
SeriesSummary moments_with_hours(std::span<const double> values,
                                 std::span<const std::int64_t> times,
                                 std::int64_t start,
                                 std::int64_t end)
{
  SeriesSummary out;
  Accumulator global;
  Accumulator hour_acc;
  std::int64_t current_hour = -1;

  auto flush = [&] {
    if (hour_acc.n == 0)
      return;
    HourlyMoments h;
    h.hour = current_hour;
    h.n = hour_acc.n;
    h.mean = hour_acc.mean;
    h.sd = std::sqrt(hour_acc.variance());
    h.partial = start + (current_hour + 1) * seconds_per_hour > end;
    out.hourly.push_back(h);
    hour_acc = Accumulator{};
  };

  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::int64_t hour = (times[i] - start) / seconds_per_hour;
    if (hour != current_hour) {
      flush();
      current_hour = hour;
    }
    hour_acc.add(values[i]);
    global.add(values[i]);
  }
  flush();

  out.n = global.n;
  out.mean = global.mean;
  out.variance = global.variance();
  return out;
}

} // namespace

void ShutterProtocol::validate() const
{
  if (block_len < 1)
    throw DomainError("block_len must be positive");
  if (discard_first && block_len < 2)
    throw DomainError("block_len must be at least 2 when the first interval is discarded");
  if (interval_len <= 0)
    throw DomainError("interval_len must be positive");
}

DifferenceSeries build_differences(std::span<const CountInterval> series,
                                   const ShutterProtocol& protocol)
{
  protocol.validate();
  const auto block_len = static_cast<std::size_t>(protocol.block_len);

  for (std::size_t i = 0; i < series.size(); ++i) {
    if (series[i].counts < 0)
      throw StructureError("negative count at interval " + std::to_string(i), i);
    if (i > 0 && series[i].t_start != series[i - 1].t_start + protocol.interval_len)
      throw StructureError("interval " + std::to_string(i) + " (t=" +
                             std::to_string(series[i].t_start) +
                             " s) does not follow its predecessor by interval_len",
                           i);
  }

  // Every run of equal shutter state must be exactly one block long; only the
  // final run may be cut short.
  std::size_t run_start = 0;
  for (std::size_t i = 1; i <= series.size(); ++i) {
    const bool run_ends = i == series.size() || series[i].shutter != series[run_start].shutter;
    const std::size_t run_len = i - run_start;
    if (run_len > block_len)
      throw StructureError("more than " + std::to_string(block_len) + " consecutive " +
                             state_name(series[run_start].shutter) +
                             " intervals starting at interval " +
                             std::to_string(run_start),
                           run_start + block_len);
    if (run_ends) {
      if (i < series.size() && run_len != block_len)
        throw StructureError("block starting at interval " + std::to_string(run_start) +
                               " has " + std::to_string(run_len) + " intervals, expected " +
                               std::to_string(block_len),
                             i);
      run_start = i;
    }
  }

  DifferenceSeries out;
  out.interval_len = protocol.interval_len;
  if (!series.empty()) {
    out.campaign_start = series.front().t_start;
    out.campaign_end = series.back().t_start + protocol.interval_len;
  }

  const std::size_t pairs = series.size() / (2 * block_len);
  const std::size_t first = protocol.discard_first ? 1 : 0;
  const auto scale = 1.0 / static_cast<double>(protocol.interval_len);
  out.samples.reserve(pairs * (block_len - first));
  out.pairing.reserve(pairs * (block_len - first));

  for (std::size_t p = 0; p < pairs; ++p) {
    const std::size_t a = 2 * p * block_len;
    const std::size_t b = a + block_len;
    const bool a_open = series[a].shutter == Shutter::Open;
    const std::size_t open = a_open ? a : b;
    const std::size_t closed = a_open ? b : a;
    for (std::size_t i = first; i < block_len; ++i) {
      const auto& o = series[open + i];
      const auto& c = series[closed + i];
      out.samples.push_back(static_cast<double>(o.counts - c.counts) * scale);
      out.pairing.push_back({p, static_cast<int>(i + 1), o.t_start, c.t_start});
    }
  }

  if (out.samples.empty())
    throw EmptyResultError("no complete open/closed block pair in the series");
  return out;
}

SeriesSummary summarize(const DifferenceSeries& diff)
{
  if (diff.size() < 2)
    throw InsufficientDataError("at least two difference samples are required, got " +
                                std::to_string(diff.size()));
  std::vector<std::int64_t> times;
  times.reserve(diff.size());
  for (const auto& p : diff.pairing)
    times.push_back(p.t_open);
  return moments_with_hours(diff.samples, times, diff.campaign_start, diff.campaign_end);
}

SeriesSummary summary_from_stats(double mean, double variance, std::size_t n)
{
  if (n < 2)
    throw InsufficientDataError("summary statistics need n >= 2");
  if (!(variance >= 0.0) || !std::isfinite(mean))
    throw DomainError("summary statistics need a finite mean and non-negative variance");
  SeriesSummary s;
  s.mean = mean;
  s.variance = variance;
  s.n = n;
  return s;
}

SeriesSummary summarize_counts(std::span<const CountInterval> series,
                               Shutter state,
                               std::int64_t interval_len)
{
  if (interval_len <= 0)
    throw DomainError("interval_len must be positive");
  std::vector<double> values;
  std::vector<std::int64_t> times;
  for (const auto& c : series) {
    if (c.shutter != state)
      continue;
    values.push_back(static_cast<double>(c.counts) / static_cast<double>(interval_len));
    times.push_back(c.t_start);
  }
  if (values.size() < 2)
    throw InsufficientDataError(std::string("fewer than two ") + state_name(state) +
                                " intervals");
  return moments_with_hours(values,
                            times,
                            series.front().t_start,
                            series.back().t_start + interval_len);
}

SeriesSummary combine_hourly(std::span<const HourlyMoments> hourly)
{
  SeriesSummary out;
  double weighted = 0.0;
  for (const auto& h : hourly) {
    out.n += h.n;
    weighted += static_cast<double>(h.n) * h.mean;
  }
  if (out.n < 2)
    throw InsufficientDataError("pooled hourly moments need n >= 2");
  out.mean = weighted / static_cast<double>(out.n);
  double m2 = 0.0;
  for (const auto& h : hourly) {
    const double d = h.mean - out.mean;
    m2 += static_cast<double>(h.n > 0 ? h.n - 1 : 0) * h.sd * h.sd +
          static_cast<double>(h.n) * d * d;
  }
  out.variance = m2 / static_cast<double>(out.n - 1);
  out.hourly.assign(hourly.begin(), hourly.end());
  return out;
}

} // namespace darkmeter
