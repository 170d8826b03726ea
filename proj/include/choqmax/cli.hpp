#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace choqmax {

// Runs the command line given argv-style arguments (program name excluded).
// Exit codes: 0 success, 1 proven-inequality violation (a bug signal),
// 2 I/O or parse error, 3 parameter admissibility error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace choqmax
