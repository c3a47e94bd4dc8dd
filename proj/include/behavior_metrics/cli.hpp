#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bmetrics::cli {

// Process exit codes; stable for scripts and the test harness.
enum ExitCode : int {
    kSuccess = 0,
    kCheckFailed = 1, // mpum: an optimality property did not hold
    kUsage = 2,
    kDataError = 3,
    kPrecondition = 4,
};

// Runs one subcommand. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace bmetrics::cli
