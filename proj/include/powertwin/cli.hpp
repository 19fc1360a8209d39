#pragma once

#include "powertwin/config.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace powertwin::cli {

/// Stable process exit codes.
enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kIngestFailed = 2,
    kTrainFailed = 3,
    kValidateFailed = 4,
    kCounterfactFailed = 5,
};

using Environment = std::vector<std::pair<std::string, std::string>>;

/// Runs `powertwin <args...>` (args exclude the program name) and returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const Environment& env = config::process_environment());

int main(int argc, char** argv);

} // namespace powertwin::cli
