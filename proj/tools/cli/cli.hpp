#ifndef ROOTFLOW_TOOLS_CLI_HPP
#define ROOTFLOW_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace rootflow::cli {

// Exit codes of the command-line tool.
enum Exit : int {
  kOk = 0,
  kVerifyFailed = 1,
  kParse = 2,
  kPrecondition = 3,
  kGenericity = 4,
  kNumerical = 5,
};

// Runs the tool on args (without the program name). Results go to `out`, or
// to the --out file when given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rootflow::cli

#endif  // ROOTFLOW_TOOLS_CLI_HPP
