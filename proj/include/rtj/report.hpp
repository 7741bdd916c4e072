#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "rtj/analysis.hpp"
#include "rtj/label.hpp"
#include "rtj/model.hpp"
#include "rtj/refactor.hpp"
#include "rtj/trace.hpp"

namespace rtj {

struct ReportTestEntry {
  std::string name;
  std::string file;
  int line = 0;
  TestOutcome::Status outcome = TestOutcome::Status::Error;
  std::vector<Label> labels;
  std::vector<RefactoringProposal> proposals;
};

struct ReportSummary {
  int total_tests = 0;
  int analyzed_tests = 0;  // passing tests, the ones the analyzers examined
  int rotten_tests = 0;    // distinct tests carrying >= 1 rotten-category label
  std::map<std::string, int> categories;     // tests per category, special cases excluded
  std::map<std::string, int> special_cases;  // both-branches false-positive bucket
};

struct Report {
  int schema_version = 1;
  std::string project_root;
  std::string project_name;
  RunMetadata run;
  std::vector<ReportTestEntry> tests;  // ordered by (file, line)
  ReportSummary summary;
};

/// Aggregates the tests array into a summary; emitting and verifying a report
/// share this single definition.
ReportSummary compute_summary(const std::vector<ReportTestEntry>& tests);

Report build_report(const ProgramModel& model, const std::vector<TestCase>& tests,
                    const DynamicTrace& trace, const std::vector<Label>& labels,
                    const std::vector<RefactoringProposal>& proposals,
                    const std::string& project_root_display);

/// Deterministic serialization: fixed key order, tests by (file, line), labels
/// by category name, newline-terminated UTF-8.
std::string serialize_report(const Report& report);

/// Parses a serialized report back (labels and edits included, enough to
/// recompute the summary and drive tooling).
Report parse_report(const std::string& json_text);

void write_report(const Report& report, const std::filesystem::path& path);

/// 0 = ran with no rotten label, 1 = at least one rotten label. Operational
/// failures map to 2 at the CLI boundary.
int exit_code_for(const Report& report);

}  // namespace rtj
