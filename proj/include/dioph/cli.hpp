#pragma once

#include <string>
#include <vector>

namespace dioph {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitParse = 2,
    kExitCap = 3,
    kExitVerification = 4,
    kExitBudget = 5,
};

/// Runs one invocation; args excludes the program name. Artifacts go to
/// stdout unless --out is given. Identical args and seed produce
/// byte-identical output.
int run_cli(const std::vector<std::string>& args);

} // namespace dioph
