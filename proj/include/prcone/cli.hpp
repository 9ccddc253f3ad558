#pragma once

#include <iosfwd>

namespace prcone {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitViolation = 1,  // relation fails or an invariant is violated
  kExitInput = 2,      // malformed input, non positive-real data, bad config
  kExitInvalidW = 3,   // W or Psi is not J-contractive
  kExitDomain = 4,     // LFT denominator not invertible
};

/// Entry point of the `prcone` tool. Results go to `out` as JSON,
/// diagnostics to `err`.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace prcone
