#pragma once
#include <iosfwd>
#include <string>
#include <vector>

namespace tbyb {

inline constexpr const char* kToolVersion = "1.0.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2, // also command-line usage errors
  kExitSizeLimit = 3,
  kExitIo = 4,
};

// Entry point of the `tbyb` command line tool. Subcommands: sweep, sequence,
// shapley, plot, validate-config. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace tbyb
