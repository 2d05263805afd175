#ifndef DIVIDEND_CLI_HPP
#define DIVIDEND_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace dividend {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitGuardRefusal = 2;

// Runs one CLI invocation; args excludes the program name. The report goes to
// --out when given, otherwise to `out`. Diagnostics go to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dividend

#endif  // DIVIDEND_CLI_HPP
