#ifndef FORGE_CLI_HPP_
#define FORGE_CLI_HPP_

#include <iosfwd>  // for ostream
#include <string>  // for string
#include <vector>  // for vector

namespace forge::cli {

  inline constexpr int kExitOk         = 0;
  inline constexpr int kExitClaimFails = 1;   // a verification reported a failure
  inline constexpr int kExitInvalid    = 2;   // bad flags or violated precondition
  inline constexpr int kExitExhausted  = 3;   // cap or coverage exhausted
  inline constexpr int kExitUnknown    = 64;  // unknown subcommand
  inline constexpr int kExitBadInput   = 65;  // malformed input file

  // Runs the forge command line on args (without the program name).
  // Results go to out, diagnostics to err.
  int run(std::vector<std::string> const& args, std::ostream& out, std::ostream& err);

}  // namespace forge::cli

#endif  // FORGE_CLI_HPP_
