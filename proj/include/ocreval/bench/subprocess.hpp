#pragma once

#include <chrono>
#include <filesystem>
#include <string>

namespace ocreval::bench {

struct ProcessResult {
  int exit_code = -1;  // -1 when killed or never started
  bool timed_out = false;
  double wall_seconds = 0.0;
  std::string error;  // spawn failure description
};

/// Runs `command` through /bin/sh -c in its own process group. stdout and
/// stderr go to `log_file` (or /dev/null when empty). On timeout the whole
/// group is killed.
ProcessResult run_shell(const std::string& command, std::chrono::duration<double> timeout,
                        const std::filesystem::path& log_file = {});

/// Wraps `value` in single quotes for /bin/sh.
std::string shell_quote(const std::string& value);

}  // namespace ocreval::bench
