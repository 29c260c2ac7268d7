#pragma once

#include <iosfwd>

namespace trapnoise {

/// Exit codes of the command-line tool. Usage errors count as config errors.
enum ExitCode : int {
    exit_ok = 0,
    exit_config = 2,
    exit_io = 3,
    exit_data = 4,
    exit_not_converged = 5,
};

/// Entry point of the `trapnoise` tool (subcommands sweep, mc, fit). Results
/// go to files under --out, the human-readable summary to `out`, progress and
/// diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace trapnoise
