#pragma once

#include <string>
#include <vector>

namespace susyspec {

// Command-line driver.  Returns the process exit code:
//   0 success, 2 config/usage errors, 3 numerical refusals,
//   4 verification failure.
int run_cli(const std::vector<std::string>& args);

} // namespace susyspec
