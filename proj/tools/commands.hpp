#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cellflow_cli {

/// Runs one command line (without the program name). The resolved
/// configuration is echoed to `out` as canonical JSON; diagnostics go to
/// `err`. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cellflow_cli
