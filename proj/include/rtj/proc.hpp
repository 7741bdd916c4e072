#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace rtj {

struct ProcessResult {
  int exit_code = -1;
  bool timed_out = false;
  bool spawn_failed = false;
  std::string output;  // stdout and stderr, merged
};

/// Runs a shell command in its own process group with extra environment
/// variables, capturing merged output. On timeout the whole group is killed.
ProcessResult run_process(const std::string& shell_command, const std::filesystem::path& cwd,
                          const std::vector<std::pair<std::string, std::string>>& extra_env,
                          double timeout_seconds);

}  // namespace rtj
