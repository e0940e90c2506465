#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace oac::cli {

enum ExitStatus { kSuccess = 0, kFailure = 1, kUsage = 2 };

/// `args[0]` is the program name. Machine output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace oac::cli
