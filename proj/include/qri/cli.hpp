#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qri::cli {

// Run one CLI invocation (args exclude the program name). Returns the process
// exit code: 0 success, 1 data/computation errors, 2 usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qri::cli
