#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace netab::cli {

/// Process exit codes.
enum ExitCode : int { kOk = 0, kEstimatorFailure = 1, kIoError = 2, kConfigError = 3 };

/// Entry point of the `netab` tool; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace netab::cli
