#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace netdist::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kData = 2;
inline constexpr int kBudget = 3;
inline constexpr int kInternal = 4;

// Runs one invocation. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace netdist::cli
