#include <doctest.h>

#include <algorithm>

#include "rtj/config.hpp"
#include "rtj/error.hpp"
#include "rtj/frontend.hpp"
#include "rtj/instrument.hpp"
#include "rtj/runner.hpp"
#include "rtj/trace.hpp"
#include "test_support.hpp"

using namespace rtj;
namespace ts = rtj::testing;
namespace fs = std::filesystem;

namespace {

FrontendConfig config_for(const fs::path& root) {
  FrontendConfig config;
  config.project_root = root;
  return config;
}

RunMetadata meta() { return RunMetadata{"t", "fw", "probe"}; }

ElementId site_at(const ProgramModel& model, const std::string& unit, int line) {
  ElementId found = 0;
  for (const auto& u : model.units()) {
    if (u.path != unit) continue;
    for (const auto& m : u.methods) {
      walk_statements(m.body, [&](const Statement& s) {
        if (s.loc.line == line && s.kind != StatementKind::Block) found = s.loc.element_id;
      });
    }
  }
  return found;
}

}  // namespace

TEST_CASE("trace file format round trip") {
  std::map<ElementId, std::uint64_t> counts = {{3, 1}, {9, 0}, {17, 4}};
  std::string text = format_trace_file("test_a.py::test_x", counts);
  CHECK(text == "#rtj-trace v1 test_a.py::test_x\n3\t1\n9\t0\n17\t4\n");
  auto parsed = parse_trace_file(text, "test_a.py::test_x");
  CHECK(parsed.size() == 3);
  CHECK(parsed.at(17) == 4);
}

TEST_CASE("trace file corruption") {
  CHECK_THROWS_AS(parse_trace_file("", ""), TraceCorruption);
  CHECK_THROWS_AS(parse_trace_file("#wrong header\n", ""), TraceCorruption);
  CHECK_THROWS_AS(parse_trace_file("#rtj-trace v1 t\nnot-a-line\n", "t"), TraceCorruption);
  CHECK_THROWS_AS(parse_trace_file("#rtj-trace v1 t\nx\t1\n", "t"), TraceCorruption);
  CHECK_THROWS_AS(parse_trace_file("#rtj-trace v1 other\n", "t"), TraceCorruption);
}

TEST_CASE("was_executed distinguishes zero from untraced") {
  std::map<std::string, TestOutcome> outcomes;
  outcomes["t"] = TestOutcome{"t", TestOutcome::Status::Pass, 1.0};
  std::map<std::string, std::unordered_map<ElementId, std::uint64_t>> hits;
  hits["t"] = {{5, 2}};
  DynamicTrace trace(std::move(outcomes), std::move(hits), {5, 6}, meta());
  CHECK(trace.was_executed("t", 5) == 2);
  CHECK(trace.was_executed("t", 6) == 0);  // instrumented, no record
  CHECK_THROWS_AS(trace.was_executed("t", 7), UntracedElement);
}

TEST_CASE("instrument with empty target set copies sources byte-identically") {
  auto out = ts::scratch_dir("inst-empty");
  FrontendConfig config = config_for(ts::fixture("corpus"));
  ProgramModel model = build_model(config);
  auto result = instrument(config.project_root, model, {}, out);
  CHECK(result.instrumented.empty());
  for (auto& entry : fs::recursive_directory_iterator(config.project_root)) {
    if (!entry.is_regular_file()) continue;
    fs::path rel = fs::relative(entry.path(), config.project_root);
    CHECK(ts::read_file(entry.path()) == ts::read_file(out / rel));
  }
  CHECK_FALSE(fs::exists(out / "_rtj_probe_runtime.py"));
  fs::remove_all(out);
}

TEST_CASE("instrument injects probes and the runtime module") {
  auto out = ts::scratch_dir("inst-full");
  FrontendConfig config = config_for(ts::fixture("corpus"));
  ProgramModel model = build_model(config);
  auto tests = find_test_cases(model, config);
  auto helpers = detect_helpers(model, config);
  auto targets = default_targets(model, tests, helpers, config);
  auto result = instrument(config.project_root, model, targets, out);

  CHECK(result.instrumented == targets);  // corpus statements all start their lines
  CHECK(result.warnings.empty());
  CHECK(fs::exists(out / "_rtj_probe_runtime.py"));

  std::string rotten = ts::read_file(out / "test_rotten.py");
  CHECK(rotten.find("_rt_probe(") != std::string::npos);
  CHECK(ts::line_of(rotten, "from _rtj_probe_runtime import probe as _rt_probe") == 1);

  // helpers.py starts with a module docstring; the import goes after it
  std::string helpers_src = ts::read_file(out / "helpers.py");
  CHECK(ts::line_of(helpers_src, "from _rtj_probe_runtime import") == 2);

  // app.py holds no targets and is untouched
  CHECK(ts::read_file(out / "app.py") ==
        ts::read_file(config.project_root / "app.py"));

  // the copy still parses
  FrontendConfig copy_config = config_for(out);
  CHECK_NOTHROW(build_model(copy_config));
  fs::remove_all(out);
}

TEST_CASE("default targets cover the analysis element classes") {
  FrontendConfig config = config_for(ts::fixture("corpus"));
  ProgramModel model = build_model(config);
  auto tests = find_test_cases(model, config);
  auto helpers = detect_helpers(model, config);
  auto targets = default_targets(model, tests, helpers, config);
  std::string rotten_src = ts::read_file(config.project_root / "test_rotten.py");
  std::string helpers_src = ts::read_file(config.project_root / "helpers.py");

  CHECK(targets.count(site_at(model, "test_rotten.py",
                              ts::line_of(rotten_src, "assert cfg.tracing"))) == 1);
  CHECK(targets.count(site_at(model, "test_rotten.py",
                              ts::line_of(rotten_src, "check_positive(item)"))) == 1);
  CHECK(targets.count(site_at(model, "test_rotten.py", ts::line_of(rotten_src, "return"))) == 1);
  CHECK(targets.count(site_at(model, "helpers.py",
                              ts::line_of(helpers_src, "assert comparator.compare_normalized"))) ==
        1);
  // app methods are not instrumented
  std::string app_src = ts::read_file(config.project_root / "app.py");
  CHECK(site_at(model, "app.py", ts::line_of(app_src, "return []")) != 0);
  CHECK(targets.count(site_at(model, "app.py", ts::line_of(app_src, "return []"))) == 0);
}

TEST_CASE("targets that share a physical line are dropped with a warning") {
  auto project = ts::scratch_dir("inline-proj");
  ts::write_file(project / "test_inline.py",
                 "def test_inline():\n"
                 "    if ready(): return\n"
                 "    assert done()\n");
  FrontendConfig config = config_for(project);
  ProgramModel model = build_model(config);
  auto tests = find_test_cases(model, config);
  auto helpers = detect_helpers(model, config);
  auto targets = default_targets(model, tests, helpers, config);
  auto out = ts::scratch_dir("inline-out");
  auto result = instrument(project, model, targets, out);
  CHECK(result.warnings.size() == 2);  // the inline return and its branch entry
  CHECK(result.instrumented.size() == targets.size() - 2);
  fs::remove_all(project);
  fs::remove_all(out);
}

TEST_CASE("classify_runner_output maps framework summaries") {
  using S = TestOutcome::Status;
  CHECK(classify_runner_output("1 passed in 0.01s", 0) == S::Pass);
  CHECK(classify_runner_output("1 failed in 0.01s", 1) == S::Fail);
  CHECK(classify_runner_output("1 error in 0.02s", 1) == S::Error);
  CHECK(classify_runner_output("2 errors in 0.02s", 1) == S::Error);
  CHECK(classify_runner_output("1 skipped in 0.00s", 0) == S::FrameworkSkipped);
  CHECK(classify_runner_output("1 xfailed in 0.00s", 0) == S::FrameworkSkipped);
  CHECK(classify_runner_output("1 failed, 1 passed in 0.03s", 1) == S::Fail);
  CHECK(classify_runner_output("no tests ran in 0.00s", 4) == S::Error);
  CHECK(classify_runner_output("", 0) == S::Pass);  // exit-code fallback
}

TEST_CASE("execute_tests runs each test in isolation and reports outcomes") {
  FrontendConfig config = config_for(ts::fixture("mini"));
  ProgramModel model = build_model(config);
  auto tests = find_test_cases(model, config);
  REQUIRE(tests.size() == 3);

  std::vector<TestCase> quick(tests.begin(), tests.begin() + 2);
  RunnerOptions options;
  options.timeout_seconds = 30;
  DynamicTrace trace = execute_tests(config.project_root, quick, options, {}, meta());
  CHECK(trace.outcome_of("test_mini.py::test_pass_fast")->status == TestOutcome::Status::Pass);
  CHECK(trace.outcome_of("test_mini.py::test_fail_fast")->status == TestOutcome::Status::Fail);
  CHECK(trace.outcome_of("test_mini.py::test_pass_fast")->duration_ms > 0);

  SUBCASE("timeout is recorded as an error outcome") {
    std::vector<TestCase> sleepy = {tests[2]};
    RunnerOptions strict;
    strict.timeout_seconds = 1.0;
    DynamicTrace slow = execute_tests(config.project_root, sleepy, strict, {}, meta());
    CHECK(slow.outcome_of("test_mini.py::test_sleepy")->status == TestOutcome::Status::Error);
  }
  SUBCASE("broken runner command is a build error") {
    RunnerOptions broken;
    broken.command_template = "/definitely/not/a/runner {nodeid}";
    CHECK_THROWS_AS(execute_tests(config.project_root, quick, broken, {}, meta()), BuildError);
  }
}

TEST_CASE("instrumented corpus run attributes per-test hit counts") {
  FrontendConfig config = config_for(ts::fixture("corpus"));
  ProgramModel model = build_model(config);
  auto tests = find_test_cases(model, config);
  auto helpers = detect_helpers(model, config);
  auto targets = default_targets(model, tests, helpers, config);
  auto out = ts::scratch_dir("inst-run");
  auto inst = instrument(config.project_root, model, targets, out);

  std::string rotten_src = ts::read_file(config.project_root / "test_rotten.py");
  ElementId loop_assert =
      site_at(model, "test_rotten.py", ts::line_of(rotten_src, "assert window[0] >= 1"));
  ElementId tail_assert =
      site_at(model, "test_rotten.py", ts::line_of(rotten_src, "assert buf.capacity == 4"));
  REQUIRE(loop_assert != 0);
  REQUIRE(tail_assert != 0);

  std::vector<TestCase> one;
  for (const auto& t : tests) {
    if (t.name.ends_with("::test_window_list_empty")) one.push_back(t);
  }
  REQUIRE(one.size() == 1);
  RunnerOptions options;
  DynamicTrace trace = execute_tests(out, one, options, inst.instrumented, meta());
  CHECK(trace.outcome_of(one[0].name)->status == TestOutcome::Status::Pass);
  CHECK(trace.was_executed(one[0].name, loop_assert) == 0);  // loop over empty list
  CHECK(trace.was_executed(one[0].name, tail_assert) == 1);
  fs::remove_all(out);
}

TEST_CASE("source snapshot timestamp is stable and well formed") {
  std::string a = source_snapshot_timestamp(ts::fixture("corpus"));
  std::string b = source_snapshot_timestamp(ts::fixture("corpus"));
  CHECK(a == b);
  CHECK(a.size() == 20);
  CHECK(a.back() == 'Z');
  CHECK(a[4] == '-');
  CHECK(a[10] == 'T');
}
