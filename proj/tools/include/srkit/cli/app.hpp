#pragma once

#include "srkit/cli/report.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace srkit::cli {

enum ExitCode : int { ok = 0, negative = 1, error = 2 };

/// Parses argv-style arguments (without the program name), runs the command and prints either
/// the JSON report (--json) or a short summary. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace srkit::cli
