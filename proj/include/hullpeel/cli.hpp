#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hullpeel::cli {

/// Exit codes: 0 success, 1 runtime or data error, 2 usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Runs the command line `args` (args[0] is the program name). Reports go to
/// `out` unless redirected with --out; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hullpeel::cli
