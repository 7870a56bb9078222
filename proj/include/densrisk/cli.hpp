#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace densrisk::cli {

enum ExitCode : int
{
  kExitOk = 0,
  kExitUsage = 2,
  kExitNumerical = 3,
};

/// Runs the command line `args` (args[0] is the program name). Results go to
/// `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace densrisk::cli
