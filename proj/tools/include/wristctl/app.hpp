#pragma once

#include <ostream>
#include <span>
#include <string>

namespace wristctl {

/// Runs one wristctl invocation. `args` excludes the program name.
/// Returns 0 on success, 1 when a module reports an error (printed to `err`
/// as "error: <category>: <message>"), 2 on a command-line usage error.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace wristctl
