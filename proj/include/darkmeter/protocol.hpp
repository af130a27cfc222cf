#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace darkmeter {

enum class Shutter
{
  Open,
  Closed
};

//! One counting interval of the raw campaign record.
struct CountInterval
{
  std::int64_t t_start = 0; //!< seconds since campaign start
  Shutter shutter = Shutter::Open;
  std::int64_t counts = 0;

  bool operator==(const CountInterval&) const = default;
};

using CountSeries = std::vector<CountInterval>;

//! Alternating open/closed block layout used while recording.
struct ShutterProtocol
{
  int block_len = 10;             //!< intervals per block
  std::int64_t interval_len = 1;  //!< seconds
  bool discard_first = true;      //!< drop the interval in which the shutter moves

  void validate() const;
  int usable_per_block() const { return discard_first ? block_len - 1 : block_len; }
};

//! Where a difference sample came from.
struct PairingIndex
{
  std::size_t block_pair = 0;
  int interval = 0;          //!< one-based index within the block
  std::int64_t t_open = 0;   //!< start of the open interval
  std::int64_t t_closed = 0; //!< start of the closed interval
};

//! Open-minus-closed differences, in counts per second.
struct DifferenceSeries
{
  std::vector<double> samples;
  std::vector<PairingIndex> pairing;
  std::int64_t interval_len = 1;
  std::int64_t campaign_start = 0; //!< start of the first recorded interval, seconds
  std::int64_t campaign_end = 0;   //!< end of the last recorded interval, seconds

  std::size_t size() const { return samples.size(); }
};

struct HourlyMoments
{
  std::int64_t hour = 0;
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;    //!< unbiased; 0 when n < 2
  bool partial = false;
};

struct SeriesSummary
{
  double mean = 0.0;
  double variance = 0.0; //!< unbiased
  std::size_t n = 0;
  std::vector<HourlyMoments> hourly;
};

/*
 * Pairs each block with the immediately following opposite-state block
 * (blocks 0/1, 2/3, ...) and subtracts interval i of the closed block from
 * interval i of the open block. The first interval of every block is dropped
 * when the protocol says so; an incomplete trailing pair is ignored.
 *
 * Throws StructureError for gaps, non-alternating blocks or a series that
 * does not start at a block boundary, and EmptyResultError when no complete
 * pair remains.
 */
DifferenceSeries build_differences(std::span<const CountInterval> series,
                                   const ShutterProtocol& protocol);

//! Unbiased moments plus a wall-clock hourly breakdown. Needs n >= 2.
SeriesSummary summarize(const DifferenceSeries& diff);

//! Summary without a sample record, e.g. from published statistics.
SeriesSummary summary_from_stats(double mean, double variance, std::size_t n);

//! Moments of the raw counts (per second) recorded in one shutter state.
SeriesSummary summarize_counts(std::span<const CountInterval> series,
                               Shutter state,
                               std::int64_t interval_len = 1);

//! Pools per-hour moments back into global (n, mean, unbiased variance).
SeriesSummary combine_hourly(std::span<const HourlyMoments> hourly);

} // namespace darkmeter
