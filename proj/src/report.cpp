#include "rtj/report.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "rtj/error.hpp"

namespace rtj {
namespace {

using ordered_json = nlohmann::ordered_json;

const char* kAllCategories[] = {
    "ContextDependentAssertion", "ContextDependentHelperCall", "FullyRottenAssertion",
    "FullyRottenHelperCall",     "MissedFail",                 "RottenAssertionInHelper",
    "Skip",                      "Smoke",
};

TestOutcome::Status status_from_string(const std::string& s) {
  if (s == "pass") return TestOutcome::Status::Pass;
  if (s == "fail") return TestOutcome::Status::Fail;
  if (s == "framework-skipped") return TestOutcome::Status::FrameworkSkipped;
  return TestOutcome::Status::Error;
}

}  // namespace

ReportSummary compute_summary(const std::vector<ReportTestEntry>& tests) {
  ReportSummary summary;
  summary.total_tests = static_cast<int>(tests.size());
  for (const char* name : kAllCategories) summary.categories[name] = 0;
  summary.special_cases[to_string(Category::BothBranchesContextDependent)] = 0;
  for (const auto& entry : tests) {
    if (entry.outcome == TestOutcome::Status::Pass) ++summary.analyzed_tests;
    std::map<std::string, bool> seen;
    bool rotten = false;
    for (const auto& label : entry.labels) {
      std::string name = to_string(label.category);
      if (seen[name]) continue;  // a test counts once per category it carries
      seen[name] = true;
      if (label.category == Category::BothBranchesContextDependent) {
        ++summary.special_cases[name];
      } else {
        ++summary.categories[name];
      }
      if (is_rotten(label.category)) rotten = true;
    }
    if (rotten) ++summary.rotten_tests;
  }
  return summary;
}

Report build_report(const ProgramModel& model, const std::vector<TestCase>& tests,
                    const DynamicTrace& trace, const std::vector<Label>& labels,
                    const std::vector<RefactoringProposal>& proposals,
                    const std::string& project_root_display) {
  Report report;
  report.project_root = project_root_display;
  std::string name = std::filesystem::path(project_root_display).filename().string();
  if (name.empty()) {
    name = std::filesystem::path(project_root_display).parent_path().filename().string();
  }
  report.project_name = name;
  report.run = trace.metadata();

  for (const auto& test : tests) {
    ReportTestEntry entry;
    entry.name = test.name;
    entry.file = test.unit;
    const Method* method = model.find_method(test.method_ref);
    entry.line = method == nullptr ? 0 : method->loc.line;
    const TestOutcome* outcome = trace.outcome_of(test.name);
    entry.outcome = outcome == nullptr ? TestOutcome::Status::Error : outcome->status;
    for (const auto& label : labels) {
      if (label.test == test.name) entry.labels.push_back(label);
    }
    for (const auto& proposal : proposals) {
      if (proposal.test == test.name) entry.proposals.push_back(proposal);
    }
    std::sort(entry.labels.begin(), entry.labels.end(), [](const Label& a, const Label& b) {
      std::string ca = to_string(a.category), cb = to_string(b.category);
      if (ca != cb) return ca < cb;
      if (a.evidence.front().line != b.evidence.front().line) {
        return a.evidence.front().line < b.evidence.front().line;
      }
      return a.evidence.front().element < b.evidence.front().element;
    });
    std::sort(entry.proposals.begin(), entry.proposals.end(),
              [](const RefactoringProposal& a, const RefactoringProposal& b) {
                std::string ka = to_string(a.kind), kb = to_string(b.kind);
                if (ka != kb) return ka < kb;
                if (a.anchor().file != b.anchor().file) return a.anchor().file < b.anchor().file;
                return a.anchor().line < b.anchor().line;
              });
    report.tests.push_back(std::move(entry));
  }
  std::sort(report.tests.begin(), report.tests.end(),
            [](const ReportTestEntry& a, const ReportTestEntry& b) {
              if (a.file != b.file) return a.file < b.file;
              if (a.line != b.line) return a.line < b.line;
              return a.name < b.name;
            });
  report.summary = compute_summary(report.tests);
  return report;
}

std::string serialize_report(const Report& report) {
  ordered_json doc;
  doc["schema_version"] = report.schema_version;
  doc["project"] = {{"root", report.project_root}, {"name", report.project_name}};
  doc["run"] = {{"timestamp", report.run.timestamp},
                {"framework_version", report.run.framework_version},
                {"instrumentation_version", report.run.instrumentation_version}};
  doc["tests"] = ordered_json::array();
  for (const auto& entry : report.tests) {
    ordered_json t;
    t["name"] = entry.name;
    t["file"] = entry.file;
    t["line"] = entry.line;
    t["outcome"] = to_string(entry.outcome);
    t["labels"] = ordered_json::array();
    for (const auto& label : entry.labels) {
      ordered_json l;
      l["category"] = to_string(label.category);
      l["analyzer"] = label.analyzer;
      l["evidence"] = ordered_json::array();
      for (const auto& item : label.evidence) {
        l["evidence"].push_back({{"element", item.element},
                                 {"file", item.file},
                                 {"line", item.line},
                                 {"hits", item.hits}});
      }
      t["labels"].push_back(std::move(l));
    }
    t["proposals"] = ordered_json::array();
    for (const auto& proposal : entry.proposals) {
      ordered_json p;
      p["kind"] = to_string(proposal.kind);
      p["category"] = to_string(proposal.rationale.category);
      p["edits"] = ordered_json::array();
      for (const auto& edit : proposal.edits) {
        p["edits"].push_back({{"file", edit.anchor.file},
                              {"line", edit.anchor.line},
                              {"insertion", edit.insertion},
                              {"original", edit.original_snippet},
                              {"replacement", edit.replacement_snippet}});
      }
      t["proposals"].push_back(std::move(p));
    }
    doc["tests"].push_back(std::move(t));
  }
  ordered_json summary;
  summary["total_tests"] = report.summary.total_tests;
  summary["analyzed_tests"] = report.summary.analyzed_tests;
  summary["rotten_tests"] = report.summary.rotten_tests;
  summary["categories"] = ordered_json::object();
  for (const auto& [category, count] : report.summary.categories) {
    summary["categories"][category] = count;
  }
  summary["special_cases"] = ordered_json::object();
  for (const auto& [category, count] : report.summary.special_cases) {
    summary["special_cases"][category] = count;
  }
  doc["summary"] = std::move(summary);
  return doc.dump(2) + "\n";
}

Report parse_report(const std::string& json_text) {
  ordered_json doc = ordered_json::parse(json_text);
  Report report;
  report.schema_version = doc.at("schema_version").get<int>();
  report.project_root = doc.at("project").at("root").get<std::string>();
  report.project_name = doc.at("project").at("name").get<std::string>();
  report.run.timestamp = doc.at("run").at("timestamp").get<std::string>();
  report.run.framework_version = doc.at("run").at("framework_version").get<std::string>();
  report.run.instrumentation_version =
      doc.at("run").at("instrumentation_version").get<std::string>();
  for (const auto& t : doc.at("tests")) {
    ReportTestEntry entry;
    entry.name = t.at("name").get<std::string>();
    entry.file = t.at("file").get<std::string>();
    entry.line = t.at("line").get<int>();
    entry.outcome = status_from_string(t.at("outcome").get<std::string>());
    for (const auto& l : t.at("labels")) {
      Label label;
      label.test = entry.name;
      auto category = category_from_string(l.at("category").get<std::string>());
      if (!category) throw Error("unknown category in report: " + l.at("category").dump());
      label.category = *category;
      label.analyzer = l.at("analyzer").get<std::string>();
      for (const auto& e : l.at("evidence")) {
        EvidenceItem item;
        item.element = e.at("element").get<ElementId>();
        item.file = e.at("file").get<std::string>();
        item.line = e.at("line").get<int>();
        item.hits = e.at("hits").get<std::uint64_t>();
        label.evidence.push_back(std::move(item));
      }
      entry.labels.push_back(std::move(label));
    }
    for (const auto& p : t.at("proposals")) {
      RefactoringProposal proposal;
      proposal.test = entry.name;
      proposal.kind = p.at("kind").get<std::string>() == "ReplaceForcedFail"
                          ? ProposalKind::ReplaceForcedFail
                          : ProposalKind::AddTodoComment;
      auto category = category_from_string(p.at("category").get<std::string>());
      proposal.rationale.category = category.value_or(Category::Smoke);
      for (const auto& e : p.at("edits")) {
        SourceEdit edit;
        edit.anchor.file = e.at("file").get<std::string>();
        edit.anchor.line = e.at("line").get<int>();
        edit.insertion = e.at("insertion").get<bool>();
        edit.original_snippet = e.at("original").get<std::string>();
        edit.replacement_snippet = e.at("replacement").get<std::string>();
        proposal.edits.push_back(std::move(edit));
      }
      entry.proposals.push_back(std::move(proposal));
    }
    report.tests.push_back(std::move(entry));
  }
  const auto& s = doc.at("summary");
  report.summary.total_tests = s.at("total_tests").get<int>();
  report.summary.analyzed_tests = s.at("analyzed_tests").get<int>();
  report.summary.rotten_tests = s.at("rotten_tests").get<int>();
  for (const auto& [key, value] : s.at("categories").items()) {
    report.summary.categories[key] = value.get<int>();
  }
  for (const auto& [key, value] : s.at("special_cases").items()) {
    report.summary.special_cases[key] = value.get<int>();
  }
  return report;
}

void write_report(const Report& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write report to " + path.string());
  out << serialize_report(report);
}

int exit_code_for(const Report& report) { return report.summary.rotten_tests > 0 ? 1 : 0; }

}  // namespace rtj
