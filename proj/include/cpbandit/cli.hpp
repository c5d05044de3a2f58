#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cpbandit::cli {

/// Stable process exit codes.
enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kPolicyError = 3,
  kIoError = 4,
};

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name. Data goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cpbandit::cli
