#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nsp::cli {

enum ExitCode : int { kSuccess = 0, kConfigError = 2, kNonConvergence = 3 };

/// Runs the command line `args` (without the program name). Summaries go to
/// `out`, diagnostics to `err`; CSV files are written under --out.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nsp::cli
