#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace botdetect::cli {

/// Entry point behind the botdetect executable. args excludes the program
/// name. Returns the process exit status; diagnostics go to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace botdetect::cli
