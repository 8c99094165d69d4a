#pragma once

#include <iosfwd>

namespace nilsphere::cli {

enum ExitCode : int { kPass = 0, kUsage = 1, kFail = 2, kBudget = 3 };

/// Runs the command line tool. Reports go to `out` (JSON or CSV), short
/// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nilsphere::cli
