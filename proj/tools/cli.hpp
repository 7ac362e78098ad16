#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace thermogeo::cli {

enum ExitCode { kOk = 0, kValidation = 1, kVerification = 2, kNumeric = 3 };

// args excludes the program name. Output goes to `out` unless --out names a file.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace thermogeo::cli
