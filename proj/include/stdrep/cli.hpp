#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stdrep::cli {

/// Exit codes: 0 success or pass, 1 check failed, 2 spec error, 3 scale error.
enum ExitCode : int { kOk = 0, kFailed = 1, kSpecError = 2, kScaleError = 3 };

/// Runs one CLI invocation; args[0] is the program name. Reports go to
/// `out`, diagnostics to `err`, artifacts to files (or `out` for "-").
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace stdrep::cli
