#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mkdbp {

// Runs the mkdbp command line (args excludes the program name) writing to
// the given streams. Returns the process exit code: 0 feasible/success,
// 1 infeasible or violation found, 2 usage, parse or overflow error.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

} // namespace mkdbp
