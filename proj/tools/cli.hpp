#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pendular::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumeric = 1;
inline constexpr int kExitUsage = 2;

/// Runs the `pendular` command line. `args` excludes the program name.
/// Data goes to `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pendular::cli
