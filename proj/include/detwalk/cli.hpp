#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace detwalk {

enum ExitCode : int {
    kExitOk = 0,
    kExitInternal = 1,
    kExitUsage = 2,
    kExitBadModelFile = 3,
    kExitValidationFailed = 4,
    kExitBudgetExceeded = 5,
};

// args excludes the program name: {"verdict", "--model", "paper3"}.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace detwalk
