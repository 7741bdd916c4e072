#pragma once

#include <any>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "rtj/config.hpp"
#include "rtj/frontend.hpp"
#include "rtj/label.hpp"
#include "rtj/model.hpp"
#include "rtj/refactor.hpp"
#include "rtj/trace.hpp"

namespace rtj {

enum class RefactorMode { None, Todo, FixMissedFail, All };

/// Per-test state threaded through the analyzer loop. Holds the shared
/// static/dynamic result accumulators so analyzers can reuse earlier work,
/// plus the suppression set the special-case detector feeds.
class AnalysisContext {
 public:
  AnalysisContext(const ProgramModel& model, const FrontendConfig& config,
                  const std::map<ElementId, int>& helpers, const DynamicTrace& trace,
                  std::filesystem::path project_root, const TestCase& test)
      : model_(model),
        config_(config),
        helpers_(helpers),
        trace_(trace),
        project_root_(std::move(project_root)),
        test_(test) {}

  const ProgramModel& model() const { return model_; }
  const FrontendConfig& config() const { return config_; }
  const std::map<ElementId, int>& helpers() const { return helpers_; }
  const DynamicTrace& trace() const { return trace_; }
  const std::filesystem::path& project_root() const { return project_root_; }
  const TestCase& test() const { return test_; }

  /// Hit count of an element under the current test; nullopt when the element
  /// was never instrumented (unknown, not zero).
  std::optional<std::uint64_t> hits(ElementId element) const;

  // shared static facts, computed once per test
  const std::vector<AssertionCallSite>& assertions();
  const std::vector<HelperCallSite>& helper_calls();
  const std::vector<GuardReturn>& guards();

  // accumulated per-analyzer results (the algorithm's running unions)
  std::map<std::string, std::any> static_results;
  std::map<std::string, std::any> dynamic_results;
  std::vector<Label> labels;

  // sites claimed by the both-branches special case; plain context-dependent
  // labeling must skip them
  std::set<ElementId> suppressed_sites;

 private:
  const ProgramModel& model_;
  const FrontendConfig& config_;
  const std::map<ElementId, int>& helpers_;
  const DynamicTrace& trace_;
  std::filesystem::path project_root_;
  const TestCase& test_;

  std::optional<std::vector<AssertionCallSite>> assertions_;
  std::optional<std::vector<HelperCallSite>> helper_calls_;
  std::optional<std::vector<GuardReturn>> guards_;
};

/// One analyzer: a static element finder, a dynamic-fact step, a labeling
/// step, and an optional refactoring step. Implementations must keep
/// label_test a pure function of its inputs.
class TestAnalyzer {
 public:
  virtual ~TestAnalyzer() = default;
  virtual std::string name() const = 0;
  virtual std::any find_elements(AnalysisContext& ctx) const = 0;
  virtual std::any dynamic_analysis(AnalysisContext& ctx, const std::any& static_facts) const = 0;
  virtual std::vector<Label> label_test(AnalysisContext& ctx, const std::any& static_facts,
                                        const std::any& dynamic_facts) const = 0;
  virtual std::vector<RefactoringProposal> apply_refactor(AnalysisContext& ctx,
                                                          std::span<const Label> own_labels,
                                                          RefactorMode mode) const;
};

/// The built-in analyzers in their fixed execution order:
/// missed-fail, smoke, both-branches, assertion-rotten, helper-call-rotten,
/// assertion-in-helper, skip.
const std::vector<std::unique_ptr<TestAnalyzer>>& builtin_analyzers();

/// Selects analyzers by comma-separated names; empty selects all, unknown
/// names throw Error. The fixed execution order is preserved regardless of
/// the list order.
std::vector<const TestAnalyzer*> select_analyzers(const std::string& comma_names);

struct PipelineResult {
  std::vector<Label> labels;
  std::vector<RefactoringProposal> proposals;
  std::vector<std::string> diagnostics;  // per-(test, analyzer) failures, skipped proposals
};

/// Algorithm core: runs every analyzer over every passing test, accumulating
/// labels and refactoring proposals. A failure in one (test, analyzer) pair is
/// recorded as a diagnostic and never aborts the run. Results are
/// deterministic for fixed inputs.
PipelineResult run_pipeline(const ProgramModel& model, const std::vector<TestCase>& tests,
                            const DynamicTrace& trace,
                            const std::vector<const TestAnalyzer*>& analyzers,
                            const FrontendConfig& config,
                            const std::filesystem::path& project_root, RefactorMode mode);

}  // namespace rtj
