#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace darkmeter::cli {

enum ExitCode : int
{
  exit_ok = 0,
  exit_input = 2,
  exit_numeric = 3,
};

inline constexpr const char* version = "0.1.0";

//! Runs one `darkmeter` invocation; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

//! 64-bit FNV-1a of a file's bytes, as 16 hex digits.
std::string file_fnv1a64(const std::string& path);

} // namespace darkmeter::cli
