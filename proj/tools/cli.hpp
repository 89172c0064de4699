#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ctgboost::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kTrainingError = 3 };

/// Runs one command line (args excludes the program name). Output goes to
/// `out`; diagnostics are a single line on `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ctgboost::cli
