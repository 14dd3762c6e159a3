#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace devaudit::cli {

/// Exit codes shared by every subcommand.
inline constexpr int kExitClean = 0;
inline constexpr int kExitRejected = 1;
inline constexpr int kExitFound = 2;

/// Runs one invocation; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace devaudit::cli
