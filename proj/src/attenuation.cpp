#include "darkmeter/attenuation.hpp"

#include "darkmeter/csv.hpp"
#include "darkmeter/error.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <numbers>

namespace darkmeter {

namespace {

std::string column_name(std::size_t col)
{
  return col == 0 ? "source" : "od" + std::to_string(col);
}

struct Fit
{
  Eigen::VectorXd x;
  Eigen::VectorXd residuals;
};

// columns: LED, then the filters listed in `filters` (original indices)
Fit fit_columns(const AttenuationSystem& system,
                const std::vector<std::size_t>& rows,
                const std::vector<std::size_t>& filters,
                Weighting weighting)
{
  const auto m = static_cast<Eigen::Index>(rows.size());
  const auto p = static_cast<Eigen::Index>(filters.size() + 1);
  if (m < p) {
    std::vector<std::string> names{column_name(0)};
    for (auto f : filters)
      names.push_back(column_name(f + 1));
    throw IdentifiabilityError("fewer rows than unknowns", names);
  }
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, p);
  Eigen::VectorXd y(m);
  Eigen::VectorXd w = Eigen::VectorXd::Ones(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& row = system.rows[rows[static_cast<std::size_t>(i)]];
    a(i, 0) = row.led_on ? 1.0 : 0.0;
    for (std::size_t j = 0; j < filters.size(); ++j)
      a(i, static_cast<Eigen::Index>(j + 1)) = row.filters[filters[j]] ? -1.0 : 0.0;
    y(i) = row.log10_rate;
    if (weighting == Weighting::InverseVariance) {
      if (!(row.log10_sd > 0.0))
        throw DomainError("inverse-variance weighting needs positive log10_sd on every row");
      w(i) = 1.0 / row.log10_sd;
    }
  }

  const Eigen::MatrixXd aw = w.asDiagonal() * a;
  const Eigen::VectorXd yw = w.asDiagonal() * y;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(aw);
  qr.setThreshold(1e-10);
  if (qr.rank() < p) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    lu.setThreshold(1e-10);
    const Eigen::MatrixXd kernel = lu.kernel();
    std::vector<std::string> names;
    for (Eigen::Index c = 0; c < p; ++c)
      if (kernel.row(c).cwiseAbs().maxCoeff() > 1e-9)
        names.push_back(column_name(c == 0 ? 0 : filters[static_cast<std::size_t>(c - 1)] + 1));
    std::string list;
    for (const auto& n : names)
      list += (list.empty() ? "" : ", ") + n;
    throw IdentifiabilityError("design matrix is rank deficient; unresolvable: " + list, names);
  }
  Fit fit;
  fit.x = qr.solve(yw);
  fit.residuals = y - a * fit.x;
  return fit;
}

double sample_sd(const std::vector<double>& v)
{
  if (v.size() < 2)
    return std::numeric_limits<double>::quiet_NaN();
  double mean = 0.0;
  for (double x : v)
    mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v)
    ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

} // namespace

std::size_t AttenuationSystem::filter_count() const
{
  return rows.empty() ? 0 : rows.front().filters.size();
}

LsSolution solve_ls(const AttenuationSystem& system, Weighting weighting)
{
  const std::size_t nf = system.filter_count();
  LsSolution sol;
  for (std::size_t i = 0; i < system.rows.size(); ++i) {
    const auto& row = system.rows[i];
    if (row.filters.size() != nf)
      throw DomainError("row " + std::to_string(i) + " has a different number of filters");
    bool any = row.led_on;
    for (bool f : row.filters)
      any = any || f;
    if (!any)
      throw DomainError("row " + std::to_string(i) + " has neither LED nor filters set");
    if (!std::isfinite(row.log10_rate))
      throw DomainError("row " + std::to_string(i) + " has a non-finite log10 rate");
    if (std::pow(10.0, row.log10_rate) > system.saturation_cutoff)
      sol.saturated_rows.push_back(i);
    else
      sol.used_rows.push_back(i);
  }
  if (sol.used_rows.empty())
    throw IdentifiabilityError("no rows left after the saturation cutoff", {"source"});

  std::vector<std::size_t> all_filters(nf);
  for (std::size_t j = 0; j < nf; ++j)
    all_filters[j] = j;
  const auto fit = fit_columns(system, sol.used_rows, all_filters, weighting);

  sol.log10_source = fit.x(0);
  for (std::size_t j = 0; j < nf; ++j)
    sol.od.push_back(fit.x(static_cast<Eigen::Index>(j + 1)));
  sol.residuals.assign(fit.residuals.begin(), fit.residuals.end());
  sol.residual_norm = fit.residuals.norm();

  // Leave one filter out; refits that lose identifiability are skipped.
  std::vector<double> source_refits;
  std::vector<std::vector<double>> od_refits(nf);
  for (std::size_t drop = 0; drop < nf; ++drop) {
    std::vector<std::size_t> rows;
    for (auto r : sol.used_rows)
      if (!system.rows[r].filters[drop])
        rows.push_back(r);
    std::vector<std::size_t> kept;
    for (std::size_t j = 0; j < nf; ++j)
      if (j != drop)
        kept.push_back(j);
    try {
      const auto refit = fit_columns(system, rows, kept, weighting);
      source_refits.push_back(refit.x(0));
      for (std::size_t j = 0; j < kept.size(); ++j)
        od_refits[kept[j]].push_back(refit.x(static_cast<Eigen::Index>(j + 1)));
    } catch (const IdentifiabilityError&) {
    }
  }
  sol.log10_source_error = sample_sd(source_refits);
  for (std::size_t j = 0; j < nf; ++j)
    sol.od_error.push_back(sample_sd(od_refits[j]));
  return sol;
}

GaussianEstimate attenuation(double log10_source, double log10_source_sd, GaussianEstimate closed_rate)
{
  if (!(closed_rate.mean > 0.0))
    throw DomainError("closed-chamber rate must be positive; no attenuation claim possible");
  if (!(log10_source_sd >= 0.0) || !(closed_rate.sd >= 0.0))
    throw DomainError("uncertainties must be non-negative");
  const double value = std::pow(10.0, log10_source) / closed_rate.mean;
  const double rel_source = std::numbers::ln10 * log10_source_sd;
  const double rel_rate = closed_rate.sd / closed_rate.mean;
  return {value, value * std::hypot(rel_source, rel_rate)};
}

GaussianEstimate ea_estimate(GaussianEstimate lab_rate, GaussianEstimate attenuation)
{
  if (!(attenuation.mean > 0.0))
    throw DomainError("attenuation must be positive");
  if (!(lab_rate.sd >= 0.0) || !(attenuation.sd >= 0.0))
    throw DomainError("uncertainties must be non-negative");
  const double value = lab_rate.mean / attenuation.mean;
  // d/dL = 1/A, d/dA = -L/A^2
  const double sd = std::hypot(lab_rate.sd / attenuation.mean,
                               lab_rate.mean * attenuation.sd / (attenuation.mean * attenuation.mean));
  return {value, sd};
}

AttenuationSystem read_attenuation_csv(std::istream& in)
{
  const auto table = read_csv_table(in);
  const auto led_col = table.column("led");
  const auto rate_col = table.column("log10_rate");
  const auto sd_col = table.column("log10_sd");

  std::vector<std::size_t> filter_cols;
  for (std::size_t f = 1;; ++f) {
    const std::string name = "f" + std::to_string(f);
    bool found = false;
    for (std::size_t c = 0; c < table.header.size(); ++c)
      if (table.header[c] == name) {
        filter_cols.push_back(c);
        found = true;
      }
    if (!found)
      break;
  }
  if (table.header.size() != filter_cols.size() + 3)
    throw InputError("expected columns led,f1..fn,log10_rate,log10_sd", 1);

  auto flag = [&](const std::string& cell, std::size_t line, const std::string& field) {
    if (cell == "1")
      return true;
    if (cell == "0")
      return false;
    throw InputError("field '" + field + "': expected 0 or 1", line, field);
  };

  AttenuationSystem system;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const auto line = table.line_numbers[r];
    StackMeasurement m;
    m.led_on = flag(row[led_col], line, "led");
    for (std::size_t j = 0; j < filter_cols.size(); ++j)
      m.filters.push_back(flag(row[filter_cols[j]], line, table.header[filter_cols[j]]));
    m.log10_rate = parse_double(row[rate_col], line, "log10_rate");
    m.log10_sd = parse_double(row[sd_col], line, "log10_sd");
    system.rows.push_back(std::move(m));
  }
  return system;
}

} // namespace darkmeter
