#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rqsl::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitUsage = 2 };

/// Runs one subcommand. `args` excludes the program name. Results go to the
/// configured output path or stdout; diagnostics go to `err`.
int run_subcommand(const std::vector<std::string>& args, std::ostream& err);

}  // namespace rqsl::cli
