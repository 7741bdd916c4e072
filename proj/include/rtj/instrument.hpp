#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "rtj/config.hpp"
#include "rtj/model.hpp"

namespace rtj {

struct InstrumentationResult {
  std::filesystem::path root;        // the instrumented copy
  std::set<ElementId> instrumented;  // targets that actually received a probe
  std::vector<std::string> warnings;
};

/// The minimum probe set for rotten-test analysis: every assertion site,
/// helper-call site, return statement, and conditional-branch entry inside
/// test and helper methods.
std::set<ElementId> default_targets(const ProgramModel& model, const std::vector<TestCase>& tests,
                                    const std::map<ElementId, int>& helpers,
                                    const FrontendConfig& config);

/// Copies the project into out_dir and injects a probe line above each target
/// statement. Probes record (current test, element id) pairs through a runtime
/// module dropped at the copy root; program behavior is otherwise unchanged.
/// Targets that cannot take a line probe (statement shares its physical line)
/// are dropped with a warning.
InstrumentationResult instrument(const std::filesystem::path& project_root,
                                 const ProgramModel& model, const std::set<ElementId>& targets,
                                 const std::filesystem::path& out_dir);

}  // namespace rtj
