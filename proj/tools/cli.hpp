#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tokensched::cli {

/// Exit codes: 0 success, 2 input/schema error, 3 infeasible, 4 internal.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitInternal = 4;

/// Runs the command line `args` (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tokensched::cli
