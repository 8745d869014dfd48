#ifndef PACEKIT_TOOLS_CLI_HPP
#define PACEKIT_TOOLS_CLI_HPP

#include <string>
#include <vector>

namespace pacekit::cli {

// Exit codes: 0 success, 1 property failure, 2 input error, 3 runtime error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitPropertyFailure = 1;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitRuntimeError = 3;

// Runs the full command line (without argv[0]); used by main and by tests.
int run_cli(const std::vector<std::string>& args);

}  // namespace pacekit::cli

#endif  // PACEKIT_TOOLS_CLI_HPP
