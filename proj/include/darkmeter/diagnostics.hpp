#pragma once

#include <cstddef>
#include <span>

namespace darkmeter {

// Both functions take equal-length chains stored back to back and split each
// chain in half before comparing within- and between-chain variance.

double split_rhat(std::span<const double> draws, std::size_t chains);

//! Multi-chain effective sample size with Geyer's initial monotone sequence.
double effective_sample_size(std::span<const double> draws, std::size_t chains);

} // namespace darkmeter
