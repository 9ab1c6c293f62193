#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace edsq {

/// Exit statuses of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitFalsified = 1, kExitBadArgs = 2, kExitBudget = 3 };

/// Runs one command line (without the program name). Everything the command
/// prints goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace edsq
