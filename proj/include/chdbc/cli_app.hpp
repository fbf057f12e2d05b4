#pragma once

#include <string>
#include <vector>

namespace chdbc {

// Full CLI entry point (run / study-convergence / list-scenarios), factored
// out of main() so tests can drive it. Returns the process exit code:
// 0 success, 2 validation error, 3 solver failure.
int cli_main(const std::vector<std::string>& args);

}  // namespace chdbc
