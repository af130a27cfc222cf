#include "darkmeter/csv.hpp"

#include "darkmeter/error.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <string_view>

namespace darkmeter {

namespace {

std::string_view trim(std::string_view s)
{
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line)
{
  std::vector<std::string_view> cells;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    cells.push_back(trim(line.substr(pos, comma - pos)));
    if (comma == std::string_view::npos)
      break;
    pos = comma + 1;
  }
  return cells;
}

template <typename T>
bool parse_number(std::string_view s, T& value)
{
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  return ec == std::errc{} && ptr == end;
}

} // namespace

std::size_t CsvTable::column(const std::string& name) const
{
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name)
      return i;
  throw InputError("missing column '" + name + "'", 1, name);
}

CsvTable read_csv_table(std::istream& in)
{
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty())
      continue;
    auto cells = split(line);
    if (table.header.empty()) {
      for (auto c : cells)
        table.header.emplace_back(c);
      continue;
    }
    if (cells.size() != table.header.size())
      throw InputError("expected " + std::to_string(table.header.size()) + " cells, found " +
                         std::to_string(cells.size()),
                       line_no);
    auto& row = table.rows.emplace_back();
    for (auto c : cells)
      row.emplace_back(c);
    table.line_numbers.push_back(line_no);
  }
  if (table.header.empty())
    throw InputError("empty table", 0);
  return table;
}

double parse_double(const std::string& cell, std::size_t line, const std::string& field)
{
  // from_chars for double rejects a leading '+', which some writers emit.
  std::string_view s = cell;
  if (!s.empty() && s.front() == '+')
    s.remove_prefix(1);
  double v = 0.0;
  if (!parse_number(s, v))
    throw InputError("field '" + field + "': '" + cell + "' is not a number", line, field);
  return v;
}

CountSeries read_count_csv(std::istream& in)
{
  CountSeries series;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto view = trim(line);
    if (view.empty())
      continue;
    const auto cells = split(view);
    if (!header_seen) {
      if (cells.size() != 3 || cells[0] != "t_start_s" || cells[1] != "shutter" ||
          cells[2] != "counts")
        throw InputError("expected header 't_start_s,shutter,counts'", line_no);
      header_seen = true;
      continue;
    }
    if (cells.size() != 3)
      throw InputError("expected 3 cells, found " + std::to_string(cells.size()), line_no);
    CountInterval c;
    if (!parse_number(cells[0], c.t_start))
      throw InputError("field 't_start_s': not an integer", line_no, "t_start_s");
    if (cells[1] == "O")
      c.shutter = Shutter::Open;
    else if (cells[1] == "C")
      c.shutter = Shutter::Closed;
    else
      throw InputError("field 'shutter': expected O or C", line_no, "shutter");
    if (!parse_number(cells[2], c.counts) || c.counts < 0)
      throw InputError("field 'counts': not a non-negative integer", line_no, "counts");
    series.push_back(c);
  }
  if (!header_seen)
    throw InputError("empty count series", 0);
  return series;
}

void write_count_csv(std::ostream& out, std::span<const CountInterval> series)
{
  std::string buf = "t_start_s,shutter,counts\n";
  buf.reserve(series.size() * 14 + buf.size());
  char num[24];
  for (const auto& c : series) {
    auto r = std::to_chars(num, num + sizeof num, c.t_start);
    buf.append(num, r.ptr);
    buf += c.shutter == Shutter::Open ? ",O," : ",C,";
    r = std::to_chars(num, num + sizeof num, c.counts);
    buf.append(num, r.ptr);
    buf += '\n';
  }
  out << buf;
}

void write_delta_csv(std::ostream& out, const DifferenceSeries& diff)
{
  std::string buf = "delta_cnt_per_s\n";
  char num[32];
  for (double d : diff.samples) {
    // shortest round-trip representation
    auto r = std::to_chars(num, num + sizeof num, d);
    buf.append(num, r.ptr);
    buf += '\n';
  }
  out << buf;
}

} // namespace darkmeter
