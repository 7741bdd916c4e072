#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rtj/analysis.hpp"
#include "rtj/config.hpp"
#include "rtj/error.hpp"
#include "rtj/frontend.hpp"
#include "rtj/instrument.hpp"
#include "rtj/report.hpp"
#include "rtj/runner.hpp"

namespace fs = std::filesystem;

namespace {

struct AnalyzeOptions {
  std::string project;
  std::string out = "rtj-report.json";
  std::string analyzers;
  std::string test_filter;
  double timeout = 60.0;
  int jobs = 0;
  std::string refactor = "none";
  bool apply = false;
  bool keep_instrumented = false;
};

rtj::RefactorMode parse_mode(const std::string& name) {
  if (name == "none") return rtj::RefactorMode::None;
  if (name == "todo") return rtj::RefactorMode::Todo;
  if (name == "fix-missed-fail") return rtj::RefactorMode::FixMissedFail;
  if (name == "all") return rtj::RefactorMode::All;
  throw rtj::Error("unknown refactor mode: " + name);
}

fs::path fresh_instrumented_dir() {
  auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
  return fs::temp_directory_path() /
         ("rtj-instrumented-" + std::to_string(::getpid()) + "-" + std::to_string(stamp));
}

int run_analyze(const AnalyzeOptions& opts) {
  rtj::FrontendConfig config = rtj::load_config(opts.project);
  rtj::ProgramModel model = rtj::build_model(config);
  std::vector<rtj::TestCase> tests = rtj::find_test_cases(model, config);
  if (!opts.test_filter.empty()) {
    std::erase_if(tests, [&](const rtj::TestCase& t) {
      std::string local = t.name;
      if (size_t sep = local.rfind("::"); sep != std::string::npos) local = local.substr(sep + 2);
      return !rtj::glob_match(opts.test_filter, t.name) &&
             !rtj::glob_match(opts.test_filter, local);
    });
  }

  std::map<rtj::ElementId, int> helpers = rtj::detect_helpers(model, config);
  std::set<rtj::ElementId> targets = rtj::default_targets(model, tests, helpers, config);

  fs::path instrumented_dir = fresh_instrumented_dir();
  rtj::InstrumentationResult instrumented =
      rtj::instrument(opts.project, model, targets, instrumented_dir);
  for (const auto& warning : instrumented.warnings) {
    std::cerr << "rtj: warning: " << warning << "\n";
  }

  rtj::RunMetadata metadata;
  metadata.timestamp = rtj::source_snapshot_timestamp(opts.project);
  metadata.framework_version = rtj::detect_framework_version();
  metadata.instrumentation_version = "rtj-probe-v1";

  rtj::RunnerOptions runner;
  runner.timeout_seconds = opts.timeout;
  runner.jobs = opts.jobs;
  rtj::DynamicTrace trace =
      rtj::execute_tests(instrumented.root, tests, runner, instrumented.instrumented, metadata);

  rtj::RefactorMode mode = parse_mode(opts.refactor);
  rtj::PipelineResult pipeline = rtj::run_pipeline(model, tests, trace,
                                                   rtj::select_analyzers(opts.analyzers), config,
                                                   opts.project, mode);
  for (const auto& diagnostic : pipeline.diagnostics) {
    std::cerr << "rtj: " << diagnostic << "\n";
  }

  rtj::Report report = rtj::build_report(model, tests, trace, pipeline.labels,
                                         pipeline.proposals, opts.project);
  rtj::write_report(report, opts.out);

  for (const auto& entry : report.tests) {
    for (const auto& label : entry.labels) {
      std::cout << to_string(label.category) << " " << entry.name << " (" << entry.file << ":"
                << label.evidence.front().line << ")\n";
    }
  }
  std::cout << report.summary.rotten_tests << " rotten / " << report.summary.analyzed_tests
            << " analyzed / " << report.summary.total_tests << " total tests; report written to "
            << opts.out << "\n";

  if (mode != rtj::RefactorMode::None && !pipeline.proposals.empty()) {
    rtj::PatchSet patch = rtj::apply_proposals(
        opts.project, pipeline.proposals,
        opts.apply ? rtj::ApplyMode::Write : rtj::ApplyMode::DryRun);
    std::cout << patch.unified_diff;
    if (opts.apply) {
      std::cout << "applied " << pipeline.proposals.size() << " proposal(s) to " << opts.project
                << "\n";
    }
  }

  if (opts.keep_instrumented) {
    std::cout << "instrumented copy kept at " << instrumented_dir.string() << "\n";
  } else {
    std::error_code ec;
    fs::remove_all(instrumented_dir, ec);
  }
  return rtj::exit_code_for(report);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rtj - rotten green test analyzer and refactoring assistant"};
  app.require_subcommand(1);

  AnalyzeOptions opts;
  CLI::App* analyze = app.add_subcommand("analyze", "analyze a project's test suite");
  analyze->add_option("project", opts.project, "project root directory")->required();
  analyze->add_option("--out", opts.out, "report file path (default rtj-report.json)");
  analyze->add_option("--analyzers", opts.analyzers, "comma-separated analyzer names (default all)");
  analyze->add_option("--tests", opts.test_filter, "glob filter on test names");
  analyze->add_option("--timeout", opts.timeout, "per-test timeout in seconds (default 60)");
  analyze->add_option("--jobs", opts.jobs, "parallel runner processes (default: cores)");
  analyze->add_option("--refactor", opts.refactor,
                      "refactoring proposals: none|todo|fix-missed-fail|all (default none)");
  analyze->add_flag("--apply", opts.apply, "write proposed refactorings to the project");
  analyze->add_flag("--keep-instrumented", opts.keep_instrumented,
                    "keep (and print) the instrumented copy directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (opts.apply && opts.refactor == "none") {
      throw rtj::Error("--apply requires --refactor todo|fix-missed-fail|all");
    }
    return run_analyze(opts);
  } catch (const std::exception& e) {
    std::cerr << "rtj: error: " << e.what() << "\n";
    return 2;
  }
}
