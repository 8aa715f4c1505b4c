#pragma once

#include <string>
#include <vector>

namespace droneflow_cli {

/// Full CLI entry point (arguments without the program name). Returns the
/// process exit code: 0 success, 1 invalid invocation or configuration,
/// 2 runtime failure.
int run_cli(const std::vector<std::string>& args);

} // namespace droneflow_cli
