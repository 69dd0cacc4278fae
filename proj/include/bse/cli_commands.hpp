#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bse {

/// Process exit codes of the bse-trl front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,          // bad flags, invalid configuration, size guard
  kExitNotConverged = 2,   // max restarts reached
  kExitIndefinite = 3,     // problem not definite (solve) or not definite (check)
  kExitBreakdown = 4,      // repeated breakdowns, partial results
  kExitIo = 5,             // unreadable, malformed or inconsistent files
  kExitNumerical = 6,      // dense factorization failed to converge
};

/// Runs `bse-trl` with the given arguments (program name excluded). Reports
/// go to `out` unless redirected by --report, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bse
