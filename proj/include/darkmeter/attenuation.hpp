#pragma once

#include "darkmeter/common.hpp"

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace darkmeter {

//! One LED/filter stack and its measured log10 count rate.
struct StackMeasurement
{
  bool led_on = true;
  std::vector<bool> filters;
  double log10_rate = 0.0;
  double log10_sd = 0.0;
};

struct AttenuationSystem
{
  std::vector<StackMeasurement> rows;
  double saturation_cutoff = 1e6; //!< counts/s; brighter rows are dropped

  std::size_t filter_count() const;
};

struct LsSolution
{
  double log10_source = 0.0;
  std::vector<double> od;
  double log10_source_error = 0.0; //!< NaN when no leave-one-out refit exists
  std::vector<double> od_error;
  std::vector<double> residuals;   //!< measured minus fitted, per used row
  double residual_norm = 0.0;
  std::vector<std::size_t> used_rows;
  std::vector<std::size_t> saturated_rows;
};

enum class Weighting
{
  Unweighted,
  InverseVariance //!< sensitivity check only
};

/*
 * Log-domain tomography: each row reads log10_rate = led * log10_source -
 * sum(OD_i over filters present). Rows whose linear rate exceeds the
 * saturation cutoff are removed before solving. Component errors are the
 * sample sd over refits that drop one filter (its column and every row using
 * it).
 *
 * Throws IdentifiabilityError naming the unresolvable columns when the
 * filtered design matrix is rank deficient.
 */
LsSolution solve_ls(const AttenuationSystem& system, Weighting weighting = Weighting::Unweighted);

//! A_c = 10^log10_source / closed_rate with first-order error propagation.
GaussianEstimate attenuation(double log10_source, double log10_source_sd, GaussianEstimate closed_rate);

//! lab_rate / A_c with first-order error propagation.
GaussianEstimate ea_estimate(GaussianEstimate lab_rate, GaussianEstimate attenuation);

//! `led,f1..fn,log10_rate,log10_sd` with led and fi in {0,1}.
AttenuationSystem read_attenuation_csv(std::istream& in);

} // namespace darkmeter
