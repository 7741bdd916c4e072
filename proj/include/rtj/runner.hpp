#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "rtj/model.hpp"
#include "rtj/trace.hpp"

namespace rtj {

struct RunnerOptions {
  double timeout_seconds = 60.0;  // per test
  int jobs = 0;                   // 0 = hardware concurrency
  /// Command template with {nodeid}, {file} and {test} placeholders. Empty
  /// selects the RTJ_RUNNER_CMD environment variable, then the built-in
  /// pytest invocation.
  std::string command_template;
  std::filesystem::path trace_dir;  // empty = fresh temp directory
};

/// Runs every listed test once, each in its own runner process, and merges the
/// per-test trace files into one DynamicTrace. `instrumented` is the element
/// set probes were injected for (empty for plain outcome runs).
/// Throws BuildError when the runner command cannot be executed at all.
DynamicTrace execute_tests(const std::filesystem::path& project_root,
                           const std::vector<TestCase>& tests, const RunnerOptions& options,
                           std::set<ElementId> instrumented, RunMetadata metadata);

/// Classifies the runner's output/exit code. Exposed for the runner tests.
TestOutcome::Status classify_runner_output(const std::string& output, int exit_code);

/// UTC ISO-8601 timestamp of the newest source file under the root; stable
/// across runs on an unchanged tree.
std::string source_snapshot_timestamp(const std::filesystem::path& project_root);

/// One-line host framework version string (cached per process).
std::string detect_framework_version();

}  // namespace rtj
