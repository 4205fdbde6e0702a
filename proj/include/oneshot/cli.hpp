#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace oneshot {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;          // I/O, file parse, or argument syntax errors
inline constexpr int kExitConstraint = 2;  // parameters violate an operation's preconditions

/// Runs one CLI invocation; `args` excludes the program name.
/// Failures print one line starting with "error: <kind>:" to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace oneshot
