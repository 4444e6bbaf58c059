#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace obsblr::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;

/// Runs one invocation of the command-line tool. `args` excludes the program
/// name. Returns kExitOk or kExitUsage; nothing is thrown.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace obsblr::cli
