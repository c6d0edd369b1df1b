#pragma once

#include <string>
#include <vector>

namespace relnotes::detail {

struct ProcessResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

/// Runs argv[0] (searched on PATH) without a shell and captures both streams.
/// Throws std::system_error if the process cannot be started.
ProcessResult run_process(const std::vector<std::string>& argv);

}  // namespace relnotes::detail
