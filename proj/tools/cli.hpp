#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace capcalc::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kLoadFailure = 2,
    kUnknownName = 3,
    kDomainError = 4,
};

/// Runs the command line `args` (program name excluded). Reports go to `out`,
/// diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Directory searched for input files that do not exist relative to the working
/// directory: $CAPCALC_FIXTURES if set, else the bundled fixtures directory.
std::string fixtures_dir();

}  // namespace capcalc::cli
