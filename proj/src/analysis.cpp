#include "rtj/analysis.hpp"

#include <algorithm>
#include <sstream>

#include "rtj/error.hpp"

namespace rtj {

std::optional<std::uint64_t> AnalysisContext::hits(ElementId element) const {
  if (trace_.instrumented_elements().count(element) == 0) return std::nullopt;
  return trace_.was_executed(test_.name, element);
}

const std::vector<AssertionCallSite>& AnalysisContext::assertions() {
  if (!assertions_) {
    assertions_ = find_assertions(model_, test_.method_ref, config_);
  }
  return *assertions_;
}

const std::vector<HelperCallSite>& AnalysisContext::helper_calls() {
  if (!helper_calls_) {
    helper_calls_ = find_helper_calls(model_, test_.method_ref, helpers_, config_);
  }
  return *helper_calls_;
}

const std::vector<GuardReturn>& AnalysisContext::guards() {
  if (!guards_) {
    guards_ = find_guard_returns(model_, test_.method_ref, helpers_, config_);
  }
  return *guards_;
}

std::vector<RefactoringProposal> TestAnalyzer::apply_refactor(AnalysisContext& ctx,
                                                              std::span<const Label> own_labels,
                                                              RefactorMode mode) const {
  // default refactoring: a TODO annotation for every label
  std::vector<RefactoringProposal> proposals;
  if (mode != RefactorMode::Todo && mode != RefactorMode::All) return proposals;
  for (const Label& label : own_labels) {
    proposals.push_back(propose_todo_comment(label, ctx.model(), ctx.project_root()));
  }
  return proposals;
}

PipelineResult run_pipeline(const ProgramModel& model, const std::vector<TestCase>& tests,
                            const DynamicTrace& trace,
                            const std::vector<const TestAnalyzer*>& analyzers,
                            const FrontendConfig& config,
                            const std::filesystem::path& project_root, RefactorMode mode) {
  PipelineResult result;
  const std::map<ElementId, int> helpers = detect_helpers(model, config);
  for (const TestCase& test : tests) {
    const TestOutcome* outcome = trace.outcome_of(test.name);
    if (outcome == nullptr || outcome->status != TestOutcome::Status::Pass) {
      continue;  // rotten *green* tests only: non-passing tests are never analyzed
    }
    AnalysisContext ctx(model, config, helpers, trace, project_root, test);
    for (const TestAnalyzer* analyzer : analyzers) {
      try {
        std::any static_facts = analyzer->find_elements(ctx);
        std::any dynamic_facts = analyzer->dynamic_analysis(ctx, static_facts);
        std::vector<Label> labels = analyzer->label_test(ctx, static_facts, dynamic_facts);
        std::vector<RefactoringProposal> proposals =
            analyzer->apply_refactor(ctx, labels, mode);
        ctx.static_results[analyzer->name()] = std::move(static_facts);
        ctx.dynamic_results[analyzer->name()] = std::move(dynamic_facts);
        for (auto& label : labels) ctx.labels.push_back(std::move(label));
        for (auto& proposal : proposals) result.proposals.push_back(std::move(proposal));
      } catch (const UnsupportedShape& e) {
        result.diagnostics.push_back("proposal skipped for " + test.name + " (" +
                                     analyzer->name() + "): " + e.what());
      } catch (const std::exception& e) {
        result.diagnostics.push_back("analyzer " + analyzer->name() + " failed on " + test.name +
                                     ": " + e.what());
      }
    }
    for (auto& label : ctx.labels) result.labels.push_back(std::move(label));
  }
  return result;
}

std::vector<const TestAnalyzer*> select_analyzers(const std::string& comma_names) {
  const auto& all = builtin_analyzers();
  if (comma_names.empty()) {
    std::vector<const TestAnalyzer*> every;
    for (const auto& a : all) every.push_back(a.get());
    return every;
  }
  std::set<std::string> wanted;
  std::stringstream in(comma_names);
  std::string name;
  while (std::getline(in, name, ',')) {
    size_t b = name.find_first_not_of(" \t");
    size_t e = name.find_last_not_of(" \t");
    if (b == std::string::npos) continue;
    wanted.insert(name.substr(b, e - b + 1));
  }
  std::vector<const TestAnalyzer*> selected;
  for (const auto& a : all) {
    if (wanted.erase(a->name()) != 0) selected.push_back(a.get());
  }
  if (!wanted.empty()) {
    throw Error("unknown analyzer: " + *wanted.begin());
  }
  return selected;
}

}  // namespace rtj
