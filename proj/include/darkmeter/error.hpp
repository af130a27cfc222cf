#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace darkmeter {

class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

//! Block layout of a count series does not follow the shutter protocol.
class StructureError : public Error
{
public:
  StructureError(const std::string& what, std::size_t row)
    : Error(what), row_(row)
  {}
  //! Zero-based index of the first offending interval.
  std::size_t row() const { return row_; }

private:
  std::size_t row_;
};

class EmptyResultError : public Error
{
public:
  using Error::Error;
};

class InsufficientDataError : public Error
{
public:
  using Error::Error;
};

class DomainError : public Error
{
public:
  using Error::Error;
};

class DegeneratePriorError : public Error
{
public:
  using Error::Error;
};

class ConvergenceError : public Error
{
public:
  using Error::Error;
};

class NumericError : public Error
{
public:
  using Error::Error;
};

class IdentifiabilityError : public Error
{
public:
  IdentifiabilityError(const std::string& what, std::vector<std::string> columns)
    : Error(what), columns_(std::move(columns))
  {}
  const std::vector<std::string>& columns() const { return columns_; }

private:
  std::vector<std::string> columns_;
};

//! Malformed input document (JSON config or CSV table).
class InputError : public Error
{
public:
  InputError(const std::string& what, std::size_t line = 0, std::string field = {})
    : Error(what), line_(line), field_(std::move(field))
  {}
  //! One-based line number, 0 when unknown.
  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

private:
  std::size_t line_;
  std::string field_;
};

} // namespace darkmeter
