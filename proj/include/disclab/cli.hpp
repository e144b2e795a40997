#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace disclab {

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,
  kExitBoundViolated = 1,
  kExitUsage = 2,
  kExitSolverFailure = 3,
};

/// Entry point of the `disclab` tool; args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace disclab
