#pragma once

#include "darkmeter/protocol.hpp"

#include <cstdint>
#include <vector>

namespace testing {

// Alternating open/closed blocks starting with an open block at t = 0.
inline darkmeter::CountSeries make_blocks(const std::vector<std::vector<std::int64_t>>& blocks,
                                          std::int64_t interval_len = 1)
{
  darkmeter::CountSeries out;
  std::int64_t t = 0;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto state = b % 2 == 0 ? darkmeter::Shutter::Open : darkmeter::Shutter::Closed;
    for (auto c : blocks[b]) {
      out.push_back({t, state, c});
      t += interval_len;
    }
  }
  return out;
}

} // namespace testing

#include <doctest.h>

namespace testing {

// doctest::Approx adds 1.0 to the comparison scale, which makes epsilon an
// absolute tolerance for small numbers; this keeps it purely relative.
inline doctest::Approx near(double value)
{
  return doctest::Approx(value).scale(0.0);
}

} // namespace testing
