#pragma once

#include <cstddef>
#include <ostream>
#include <string>

namespace wentropy {

enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitParseError = 2, kExitIoError = 3 };

struct RunOptions {
  std::string out_dir = "wentropy-out";
  std::size_t jobs = 1;
  bool csv = true;
  bool svg = true;
  double tol_scale = 1.0;
};

/// Runs every scenario of a config file and writes per-scenario outputs.
int run_config(const std::string& config_path, const RunOptions& options, std::ostream& out,
               std::ostream& err);

/// Entry point of the wentropy tool.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wentropy
