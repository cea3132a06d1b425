#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qgraph::cli {

enum ExitCode : int {
  kOk = 0,
  kReject = 1,
  kIndeterminate = 2,
  kUsage = 64,
  kParse = 65,
};

/// Runs one `qgraph` invocation. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qgraph::cli
