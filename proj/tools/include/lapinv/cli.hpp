#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace lapinv {

enum ExitCode : int { kExitOk = 0, kExitParse = 1, kExitHypothesis = 2, kExitVerification = 3 };

/// Runs one command; `args` excludes the program name.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace lapinv
