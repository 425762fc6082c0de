#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rz2::cli {

/// Exit statuses of the rz2 tool.
enum ExitCode : int {
  kSuccess = 0,
  kConfigError = 1,   ///< bad flags or config validation failure
  kPrecondition = 2,  ///< engine hypothesis not met (e.g. non-identical laws)
};

/// Runs one invocation; args excludes the program name. Reports go to the
/// --out file or to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rz2::cli
