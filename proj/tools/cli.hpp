#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nkbif::cli {

enum ExitCode : int { kOk = 0, kInvalidInput = 2, kNumericalFailure = 3 };

/// Runs one command line (without the program name). Results go to `out` unless an
/// --output/--out-dir option redirects them; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nkbif::cli
