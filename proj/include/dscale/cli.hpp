#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dscale::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsage = 1,
  kNumerical = 2,
};

/// Runs one subcommand. Tables go to files (or `out` for `--out -`),
/// summaries to `out`, diagnostics and usage text to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dscale::cli
