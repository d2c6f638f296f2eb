#ifndef SEMSEL_TOOLS_CLI_HPP
#define SEMSEL_TOOLS_CLI_HPP

#include <iosfwd>

namespace semsel::cli {

enum ExitCode : int {
    kOk = 0,
    kRuntime = 1,
    kUsage = 2,
    kConfig = 3,
    kInvariant = 4,
};

/// Parses argv (argv[0] is the program name), runs the subcommand and
/// returns the process exit status. Diagnostics go to `err`.
int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace semsel::cli

#endif  // SEMSEL_TOOLS_CLI_HPP
