#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace hardy {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 2,
    kExitStatistics = 3,
    kExitInternal = 4,
};

// Runs the command line `hardy <args...>` (args excludes the program name)
// writing results to `out` and diagnostics to `err`. Returns the exit code.
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace hardy
