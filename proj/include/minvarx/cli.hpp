#pragma once

namespace minvarx::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kDataError = 3,
  kNumericalError = 4,
};

/// Entry point of the minvarx command-line tool.
int run(int argc, char** argv);

}  // namespace minvarx::cli
