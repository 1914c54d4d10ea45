#ifndef SPINLIE_TOOLS_CLI_HPP
#define SPINLIE_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace spinlie::cli {

enum ExitCode : int { kOk = 0, kInputError = 2, kPrecondition = 3, kVerificationFailed = 4 };

/// Runs the command line `args` (without the program name). The report goes
/// to `out` as JSON, diagnostics to `err`; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spinlie::cli

#endif  // SPINLIE_TOOLS_CLI_HPP
