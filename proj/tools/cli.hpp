#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace grhs::cli {

enum ExitCode : int { kPass = 0, kCheckFailed = 1, kConfigError = 2, kNumericalError = 3 };

/// Parses args (without the program name), runs one command and writes its
/// JSON report under --out. The report is written on every exit path that
/// gets past argument parsing.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace grhs::cli
