#pragma once

#include <string>
#include <vector>

namespace clocklam::cli {

struct CliResult {
  int exit_code = 0;
  std::string out;
  std::string err;
};

// Exit codes: 0 success (reduce: reached; discriminate: inconvertible),
// 1 usage or parse error, 2 cycle certificate, 3 budget exhausted,
// 10 convertible, 20 inconclusive.
CliResult run_cli(const std::vector<std::string>& args);

}  // namespace clocklam::cli
