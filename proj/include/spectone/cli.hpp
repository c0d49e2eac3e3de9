#pragma once

#include <iosfwd>

namespace spectone::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kOk = 0,
  kDomainError = 1,
  kIoError = 2,
  kSolverError = 3,
};

/// Parses argv and runs one subcommand: bound, threshold, generate,
/// spectrum, sweep, barta or check-mesh. Reports go to `out` unless
/// --output is given; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spectone::cli
