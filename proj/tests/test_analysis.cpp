#include <doctest.h>

#include <algorithm>
#include <map>

#include "rtj/analysis.hpp"
#include "rtj/config.hpp"
#include "rtj/error.hpp"
#include "rtj/frontend.hpp"
#include "rtj/instrument.hpp"
#include "rtj/runner.hpp"
#include "test_support.hpp"

using namespace rtj;
namespace ts = rtj::testing;
namespace fs = std::filesystem;

namespace {

struct CorpusRun {
  FrontendConfig config;
  ProgramModel model;
  std::vector<TestCase> tests;
  std::map<ElementId, int> helpers;
  DynamicTrace trace;
  PipelineResult pipeline;
  std::string rotten_src, clean_src, helpers_src;
};

// One real instrumented run over the bundled corpus, shared by the cases below.
const CorpusRun& corpus_run() {
  static const CorpusRun run = [] {
    CorpusRun r;
    r.config.project_root = ts::fixture("corpus");
    r.model = build_model(r.config);
    r.tests = find_test_cases(r.model, r.config);
    r.helpers = detect_helpers(r.model, r.config);
    auto targets = default_targets(r.model, r.tests, r.helpers, r.config);
    auto out = ts::scratch_dir("analysis-corpus");
    auto inst = instrument(r.config.project_root, r.model, targets, out);
    RunnerOptions options;
    r.trace = execute_tests(out, r.tests, options, inst.instrumented,
                            RunMetadata{"t", "fw", "probe"});
    r.pipeline = run_pipeline(r.model, r.tests, r.trace, select_analyzers(""), r.config,
                              r.config.project_root, RefactorMode::None);
    fs::remove_all(out);
    r.rotten_src = ts::read_file(r.config.project_root / "test_rotten.py");
    r.clean_src = ts::read_file(r.config.project_root / "test_clean.py");
    r.helpers_src = ts::read_file(r.config.project_root / "helpers.py");
    return r;
  }();
  return run;
}

std::vector<const Label*> labels_of(const CorpusRun& r, const std::string& simple_name) {
  std::vector<const Label*> out;
  for (const auto& label : r.pipeline.labels) {
    if (label.test.ends_with("::" + simple_name)) out.push_back(&label);
  }
  return out;
}

std::vector<Category> categories_of(const CorpusRun& r, const std::string& simple_name) {
  std::vector<Category> out;
  for (const auto* label : labels_of(r, simple_name)) out.push_back(label->category);
  std::sort(out.begin(), out.end());
  return out;
}

// synthetic-trace builder for edge cases not present in the corpus
DynamicTrace fake_trace(const std::vector<TestCase>& tests,
                        const std::map<std::string, TestOutcome::Status>& statuses,
                        std::map<std::string, std::unordered_map<ElementId, std::uint64_t>> hits,
                        std::set<ElementId> instrumented) {
  std::map<std::string, TestOutcome> outcomes;
  for (const auto& t : tests) {
    auto it = statuses.find(t.name);
    outcomes[t.name] = TestOutcome{
        t.name, it == statuses.end() ? TestOutcome::Status::Pass : it->second, 1.0};
  }
  return DynamicTrace(std::move(outcomes), std::move(hits), std::move(instrumented),
                      RunMetadata{"t", "fw", "probe"});
}

}  // namespace

TEST_CASE("assertion-rotten analyzer") {
  const CorpusRun& r = corpus_run();
  SUBCASE("unexecuted assertions under a dead conditional are context dependent") {
    auto labels = labels_of(r, "test_config_branch_assertions");
    REQUIRE(labels.size() == 2);
    for (const auto* label : labels) {
      CHECK(label->category == Category::ContextDependentAssertion);
      CHECK(label->analyzer == "assertion-rotten");
      REQUIRE(label->evidence.size() == 1);
      CHECK(label->evidence[0].hits == 0);
    }
    CHECK(labels[0]->evidence[0].line == ts::line_of(r.rotten_src, "assert cfg.log_level"));
    CHECK(labels[1]->evidence[0].line == ts::line_of(r.rotten_src, "assert cfg.tracing"));
  }
  SUBCASE("loop over an empty collection is fully rotten") {
    auto cats = categories_of(r, "test_window_list_empty");
    CHECK(cats == std::vector<Category>{Category::FullyRottenAssertion});
  }
  SUBCASE("executed assertions produce no labels") {
    CHECK(labels_of(r, "test_parse_round_trip").empty());
    CHECK(labels_of(r, "test_ring_buffer_windows_full").empty());
    CHECK(labels_of(r, "test_accumulate_values").empty());
  }
}

TEST_CASE("helper-call-rotten analyzer") {
  const CorpusRun& r = corpus_run();
  SUBCASE("helper call in a dead else branch is context dependent") {
    auto cats = categories_of(r, "test_parse_sign_helper");
    CHECK(cats == std::vector<Category>{Category::ContextDependentHelperCall});
  }
  SUBCASE("helper call in an empty loop is fully rotten") {
    auto cats = categories_of(r, "test_filter_positive_empty");
    CHECK(cats == std::vector<Category>{Category::FullyRottenHelperCall});
  }
  SUBCASE("executed helper calls produce no labels") {
    CHECK(labels_of(r, "test_store_round_trip_helper").empty());
  }
}

TEST_CASE("assertion-in-helper analyzer") {
  const CorpusRun& r = corpus_run();
  auto labels = labels_of(r, "test_comparator_normalization");
  REQUIRE(labels.size() == 1);
  const Label& label = *labels[0];
  CHECK(label.category == Category::RottenAssertionInHelper);
  REQUIRE(label.evidence.size() == 2);
  CHECK(label.evidence[0].file == "test_rotten.py");
  CHECK(label.evidence[0].hits > 0);  // the call executed
  CHECK(label.evidence[1].file == "helpers.py");
  CHECK(label.evidence[1].hits == 0);  // the assertion written in the helper did not
  CHECK(label.evidence[1].line ==
        ts::line_of(r.helpers_src, "assert comparator.compare_normalized"));
}

TEST_CASE("skip analyzer") {
  const CorpusRun& r = corpus_run();
  SUBCASE("always-firing guard with a trailing unexecuted assertion") {
    auto cats = categories_of(r, "test_store_flush_guard");
    // the trailing assertion is also fully rotten: no conditional ancestor
    CHECK(cats == std::vector<Category>{Category::FullyRottenAssertion, Category::Skip});
    for (const auto* label : labels_of(r, "test_store_flush_guard")) {
      if (label->category != Category::Skip) continue;
      REQUIRE(label->evidence.size() == 2);
      CHECK(label->evidence[0].hits > 0);   // the executed return
      CHECK(label->evidence[1].hits == 0);  // the skipped assertion
    }
  }
  SUBCASE("final return with nothing below is not a skip") {
    ProgramModel model = ts::make_model({{"t/test_s.py",
                                          "def test_tail():\n"
                                          "    assert ready()\n"
                                          "    return\n"}});
    FrontendConfig config;
    auto tests = find_test_cases(model, config);
    REQUIRE(tests.size() == 1);
    auto helpers = detect_helpers(model, config);
    auto targets = default_targets(model, tests, helpers, config);
    const Method* m = ts::method_named(model, "test_tail");
    ElementId assert_id = m->body.children[0].loc.element_id;
    ElementId return_id = m->body.children[1].loc.element_id;
    auto trace = fake_trace(tests, {}, {{tests[0].name, {{assert_id, 1}, {return_id, 1}}}},
                            targets);
    auto result = run_pipeline(model, tests, trace, select_analyzers("skip"), config, "/tmp",
                               RefactorMode::None);
    CHECK(result.labels.empty());
  }
  SUBCASE("return and below-assertion both executed (loop re-entry) is not a skip") {
    ProgramModel model = ts::make_model({{"t/test_l.py",
                                          "def test_loop_return():\n"
                                          "    for item in items():\n"
                                          "        if item > 1:\n"
                                          "            return\n"
                                          "        assert item >= 0\n"}});
    FrontendConfig config;
    auto tests = find_test_cases(model, config);
    auto helpers = detect_helpers(model, config);
    auto targets = default_targets(model, tests, helpers, config);
    ElementId return_id = 0, assert_id = 0;
    const Method* m = ts::method_named(model, "test_loop_return");
    walk_statements(m->body, [&](const Statement& s) {
      if (s.kind == StatementKind::Return) return_id = s.loc.element_id;
      if (s.kind == StatementKind::Call && s.call.callee == "assert") assert_id = s.loc.element_id;
    });
    auto trace = fake_trace(tests, {}, {{tests[0].name, {{assert_id, 1}, {return_id, 1}}}},
                            targets);
    auto result = run_pipeline(model, tests, trace, select_analyzers("skip"), config, "/tmp",
                               RefactorMode::None);
    CHECK(result.labels.empty());
  }
}

TEST_CASE("missed-fail analyzer") {
  const CorpusRun& r = corpus_run();
  SUBCASE("forced fail in a dead branch, execution irrelevant") {
    auto cats = categories_of(r, "test_parse_magic_dead_fail");
    CHECK(cats == std::vector<Category>{Category::MissedFail});  // no CDA for the same site
  }
  SUBCASE("executed forced fail swallowed by the test still qualifies") {
    auto labels = labels_of(r, "test_parse_swallowed_failure");
    REQUIRE(labels.size() == 1);
    CHECK(labels[0]->category == Category::MissedFail);
    CHECK(labels[0]->evidence[0].hits > 0);
  }
}

TEST_CASE("smoke analyzer") {
  const CorpusRun& r = corpus_run();
  auto labels = labels_of(r, "test_smoke_setup_only");
  REQUIRE(labels.size() == 1);  // smoke is exclusive
  CHECK(labels[0]->category == Category::Smoke);
  CHECK(labels[0]->analyzer == "smoke");
  SUBCASE("tests with assertions or helper calls are not smoke") {
    for (const auto& label : r.pipeline.labels) {
      if (label.category == Category::Smoke) {
        CHECK(label.test.ends_with("::test_smoke_setup_only"));
      }
    }
  }
}

TEST_CASE("both-branches special case") {
  const CorpusRun& r = corpus_run();
  auto labels = labels_of(r, "test_feature_probe_both_branches");
  REQUIRE(labels.size() == 1);  // the plain context-dependent label is suppressed
  CHECK(labels[0]->category == Category::BothBranchesContextDependent);
  CHECK(labels[0]->evidence.size() == 1);
  CHECK(labels[0]->evidence[0].hits == 0);
  CHECK(labels[0]->evidence[0].line == ts::line_of(r.rotten_src, "assert module is None"));

  SUBCASE("conditional with assertions on one side only is not this case") {
    auto cats = categories_of(r, "test_config_branch_assertions");
    CHECK(std::count(cats.begin(), cats.end(), Category::BothBranchesContextDependent) == 0);
  }
  SUBCASE("both branches executed across one run is not this case") {
    ProgramModel model = ts::make_model({{"t/test_b.py",
                                          "def test_loop_both():\n"
                                          "    for item in items():\n"
                                          "        if item > 1:\n"
                                          "            assert big(item)\n"
                                          "        else:\n"
                                          "            assert small(item)\n"}});
    FrontendConfig config;
    auto tests = find_test_cases(model, config);
    auto helpers = detect_helpers(model, config);
    auto targets = default_targets(model, tests, helpers, config);
    ElementId then_assert = 0, else_assert = 0;
    const Method* m = ts::method_named(model, "test_loop_both");
    walk_statements(m->body, [&](const Statement& s) {
      if (s.kind == StatementKind::Call && s.call.callee == "assert") {
        (then_assert == 0 ? then_assert : else_assert) = s.loc.element_id;
      }
    });
    auto trace = fake_trace(tests, {},
                            {{tests[0].name, {{then_assert, 2}, {else_assert, 1}}}}, targets);
    auto result = run_pipeline(model, tests, trace, select_analyzers(""), config, "/tmp",
                               RefactorMode::None);
    CHECK(result.labels.empty());
  }
}

TEST_CASE("green-only invariant on the corpus") {
  const CorpusRun& r = corpus_run();
  CHECK(labels_of(r, "test_accumulate_failing").empty());
  CHECK(labels_of(r, "test_disk_backend_skipped").empty());
  for (const auto& label : r.pipeline.labels) {
    const TestOutcome* outcome = r.trace.outcome_of(label.test);
    REQUIRE(outcome != nullptr);
    CHECK(outcome->status == TestOutcome::Status::Pass);
  }
}

TEST_CASE("evidence invariant on the corpus") {
  const CorpusRun& r = corpus_run();
  for (const auto& label : r.pipeline.labels) {
    REQUIRE_FALSE(label.evidence.empty());
    if (label.category == Category::MissedFail || label.category == Category::Smoke) continue;
    bool has_zero = std::any_of(label.evidence.begin(), label.evidence.end(),
                                [](const EvidenceItem& e) { return e.hits == 0; });
    CHECK(has_zero);
  }
}

TEST_CASE("pipeline determinism") {
  const CorpusRun& r = corpus_run();
  auto again = run_pipeline(r.model, r.tests, r.trace, select_analyzers(""), r.config,
                            r.config.project_root, RefactorMode::None);
  REQUIRE(again.labels.size() == r.pipeline.labels.size());
  for (size_t i = 0; i < again.labels.size(); ++i) {
    CHECK(again.labels[i].test == r.pipeline.labels[i].test);
    CHECK(again.labels[i].category == r.pipeline.labels[i].category);
    REQUIRE(again.labels[i].evidence.size() == r.pipeline.labels[i].evidence.size());
    for (size_t j = 0; j < again.labels[i].evidence.size(); ++j) {
      CHECK(again.labels[i].evidence[j].element == r.pipeline.labels[i].evidence[j].element);
      CHECK(again.labels[i].evidence[j].hits == r.pipeline.labels[i].evidence[j].hits);
    }
  }
}

TEST_CASE("empty test list yields empty results") {
  const CorpusRun& r = corpus_run();
  auto result = run_pipeline(r.model, {}, r.trace, select_analyzers(""), r.config,
                             r.config.project_root, RefactorMode::None);
  CHECK(result.labels.empty());
  CHECK(result.proposals.empty());
}

TEST_CASE("analyzer registry") {
  CHECK(builtin_analyzers().size() == 7);
  SUBCASE("fixed order") {
    std::vector<std::string> names;
    for (const auto& a : builtin_analyzers()) names.push_back(a->name());
    CHECK(names == std::vector<std::string>{"missed-fail", "smoke", "both-branches",
                                            "assertion-rotten", "helper-call-rotten",
                                            "assertion-in-helper", "skip"});
  }
  SUBCASE("selection preserves execution order regardless of list order") {
    auto selected = select_analyzers("skip,missed-fail");
    REQUIRE(selected.size() == 2);
    CHECK(selected[0]->name() == "missed-fail");
    CHECK(selected[1]->name() == "skip");
  }
  SUBCASE("unknown name") { CHECK_THROWS_AS(select_analyzers("nope"), Error); }
}

namespace {
class ExplodingAnalyzer final : public TestAnalyzer {
 public:
  std::string name() const override { return "exploding"; }
  std::any find_elements(AnalysisContext&) const override {
    throw AnalyzerError("boom");
  }
  std::any dynamic_analysis(AnalysisContext&, const std::any&) const override { return {}; }
  std::vector<Label> label_test(AnalysisContext&, const std::any&, const std::any&) const override {
    return {};
  }
};
}  // namespace

TEST_CASE("one analyzer's failure never aborts the run") {
  const CorpusRun& r = corpus_run();
  ExplodingAnalyzer exploding;
  std::vector<const TestAnalyzer*> analyzers = {&exploding};
  for (const auto* a : select_analyzers("")) analyzers.push_back(a);
  auto result = run_pipeline(r.model, r.tests, r.trace, analyzers, r.config,
                             r.config.project_root, RefactorMode::None);
  CHECK(result.labels.size() == r.pipeline.labels.size());
  CHECK(result.diagnostics.size() == 14);  // one per passing test
  CHECK(result.diagnostics[0].find("exploding") != std::string::npos);
}
