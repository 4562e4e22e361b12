#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spectra_lab::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kResource = 3,
  kContract = 4,
};

// args excludes the program name, e.g. {"count", "--word", "abab", "--kind", "toeplitz", "--n", "2"}.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spectra_lab::cli
