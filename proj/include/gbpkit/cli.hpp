#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gbpkit::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kOk = 0,        // success, or a verdict was reached (Certified / Unknown)
    kNegative = 1,  // Falsified, NotAProjection, NotAGbp, failed repro row
    kInputError = 2,
};

/// Runs one command line (args excludes the program name). Reports go to
/// `out` as `key = value` lines; diagnostics go to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace gbpkit::cli
