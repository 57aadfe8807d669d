#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace garchmom::cli {

/// Process exit codes. Stable across versions.
enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kIo = 3,
  kInfeasible = 4,
  kOutOfRegion = 5,
  kNumerical = 6,
};

/// Runs one CLI invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace garchmom::cli
