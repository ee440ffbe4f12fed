#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace treksem::cli {

/// Runs one command.  `args` excludes the program name.  Returns the exit
/// status: 0 success / inside, 1 outside or a failed check, 2 bad input.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace treksem::cli
