#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace xyzbethe::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitVerification = 3;

// argv[0] is the program name. Tables and reports go to out, summaries and
// diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace xyzbethe::cli
