#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rkbench::cli {

// Exit codes: 0 analysis completed (violations are content), 2 input error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;

// Runs one invocation; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rkbench::cli
