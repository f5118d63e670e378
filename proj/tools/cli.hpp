#ifndef BN_TOOLS_CLI_HPP_
#define BN_TOOLS_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace bn::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kDomainError = 1;  // impossible evidence, loopy input, invalid network
inline constexpr int kUsageError = 2;   // bad arguments, unreadable or malformed file

// Runs the command line `args` (without the program name). Results go to
// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bn::cli

#endif  // BN_TOOLS_CLI_HPP_
