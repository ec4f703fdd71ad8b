#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace voxsim::cli {

enum ExitCode { kOk = 0, kValidationError = 1, kRuntimeError = 2 };

// Full command line without the program name, e.g. {"run", "--layout", "l.json"}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace voxsim::cli
