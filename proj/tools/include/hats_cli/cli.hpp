#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hats::cli {

/// Runs one command line (args[0] is the program name). Returns 0 for
/// WIN/OK, 1 for LOSE/refuted and 2 for usage or runtime errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hats::cli
