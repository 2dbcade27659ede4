#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cachesched {

// Process exit codes of the command-line tool.
namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kIo = 1;
inline constexpr int kValidation = 2;
inline constexpr int kInfeasible = 3;
inline constexpr int kLimit = 4;
inline constexpr int kGuard = 5;
inline constexpr int kUsage = 64;
}  // namespace exit_code

// Runs one command line (args[0] is the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cachesched
