#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace harmony::cli {

/// Runs one CLI invocation (args exclude the program name). Regular output
/// goes to `out`, diagnostics and the "error: <code>: <message>" line to
/// `err`. Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace harmony::cli
