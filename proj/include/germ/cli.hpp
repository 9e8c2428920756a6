#pragma once

// Command-line front end. Exit codes: 0 verdict true or task done,
// 1 verdict false, 2 usage, parse or domain error, 3 insufficient truncation.

#include <iosfwd>
#include <string>
#include <vector>

namespace germ::cli {

enum ExitCode : int { kOk = 0, kFalse = 1, kUsage = 2, kPrecision = 3 };

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace germ::cli
