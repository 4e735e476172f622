#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nocsec::tools {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kInternalError = 3 };

/// Runs the command line `args` (without the program name). Normal output
/// goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nocsec::tools
