#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace weyl::cli {

/// Exit codes of the weyl-lab executable.
enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kFormat = 3,
  kDomain = 4,  // also shape and numeric failures
  kResource = 5,
};

/// Runs one weyl-lab invocation; `args` excludes the program name. Reports without an
/// output path go to `out`; errors are one JSON line on `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace weyl::cli
