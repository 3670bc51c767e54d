#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace owcad {

/// Exit codes of the command line front end.
enum ExitCode : int { kDecided = 0, kError = 1, kInconclusive = 2 };

/// Runs the `owcad` command line with args[0] the program name. JSON goes to
/// `out`, usage text and CLI11 help to `err`; input files named "-" or
/// omitted are read from `in`.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace owcad
