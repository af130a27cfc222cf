#pragma once

#include "darkmeter/protocol.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace darkmeter {

//! Header plus raw string cells of a small comma-separated table.
struct CsvTable
{
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers; //!< one-based source line of each row

  //! Column position by name; throws InputError when absent.
  std::size_t column(const std::string& name) const;
};

CsvTable read_csv_table(std::istream& in);

//! Parses a numeric cell, reporting line and column name on failure.
double parse_double(const std::string& cell, std::size_t line, const std::string& field);

//! `t_start_s,shutter,counts` with shutter in {O,C}.
CountSeries read_count_csv(std::istream& in);
void write_count_csv(std::ostream& out, std::span<const CountInterval> series);

//! Single column `delta_cnt_per_s`.
void write_delta_csv(std::ostream& out, const DifferenceSeries& diff);

} // namespace darkmeter
