#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cdmn::cli {

enum ExitCode : int { kOk = 0, kFailed = 1, kIo = 2, kLimit = 3 };

/// Runs one command line (without the program name). Output goes to `out`,
/// diagnostics and errors to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cdmn::cli
