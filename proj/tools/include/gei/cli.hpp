#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gei::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitReject = 2;

/// Runs the `gei` command line. args[0] is the program name. Normal output goes to `out`,
/// diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gei::cli
