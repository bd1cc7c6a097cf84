#pragma once

#include <iosfwd>

namespace fqsde {

/// Exit statuses of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitSuiteFailure = 1, kExitBadConfig = 2, kExitNonConvergence = 3 };

/// Entry point of the `fqsde` tool with injectable streams.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fqsde
