#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace wfkit::cli {

enum ExitCode { kOk = 0, kViolation = 1, kBadInput = 2, kBadParameter = 3 };

// args excludes the program name. Results go to `out` (or --out), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wfkit::cli
