#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

#include "rtj/analysis.hpp"

namespace rtj {
namespace {

bool chain_has_conditional(const std::vector<ContextEntry>& chain) {
  return std::any_of(chain.begin(), chain.end(), [](const ContextEntry& e) {
    return e.kind == StatementKind::Conditional;
  });
}

EvidenceItem evidence_for(const SourceLocation& loc, std::uint64_t hits) {
  return EvidenceItem{loc.element_id, loc.file, loc.line, hits};
}

Label make_label(const AnalysisContext& ctx, Category category, const char* analyzer,
                 std::vector<EvidenceItem> evidence) {
  Label label;
  label.test = ctx.test().name;
  label.category = category;
  label.analyzer = analyzer;
  label.evidence = std::move(evidence);
  return label;
}

// hit counts for a set of elements; untraced elements are absent
using HitMap = std::unordered_map<ElementId, std::uint64_t>;

HitMap collect_hits(const AnalysisContext& ctx, const std::vector<ElementId>& elements) {
  HitMap map;
  for (ElementId id : elements) {
    if (auto count = ctx.hits(id)) map[id] = *count;
  }
  return map;
}

// ---------------------------------------------------------------------------

class MissedFailAnalyzer final : public TestAnalyzer {
 public:
  std::string name() const override { return "missed-fail"; }

  std::any find_elements(AnalysisContext& ctx) const override {
    std::vector<AssertionCallSite> forced;
    for (const auto& site : ctx.assertions()) {
      if (site.is_forced_fail) forced.push_back(site);
    }
    return forced;
  }

  std::any dynamic_analysis(AnalysisContext& ctx, const std::any& static_facts) const override {
    // purely static by definition: execution of a forced fail is irrelevant,
    // but the recorded count is kept for the report
    const auto& forced = std::any_cast<const std::vector<AssertionCallSite>&>(static_facts);
    std::vector<ElementId> ids;
    for (const auto& site : forced) ids.push_back(site.site.element_id);
    return collect_hits(ctx, ids);
  }

  std::vector<Label> label_test(AnalysisContext& ctx, const std::any& static_facts,
                                const std::any& dynamic_facts) const override {
    const auto& forced = std::any_cast<const std::vector<AssertionCallSite>&>(static_facts);
    const auto& hits = std::any_cast<const HitMap&>(dynamic_facts);
    std::vector<Label> labels;
    for (const auto& site : forced) {
      auto it = hits.find(site.site.element_id);
      std::uint64_t count = it == hits.end() ? 0 : it->second;
      labels.push_back(make_label(ctx, Category::MissedFail, "missed-fail",
                                  {evidence_for(site.site, count)}));
    }
    return labels;
  }

  std::vector<RefactoringProposal> apply_refactor(AnalysisContext& ctx,
                                                  std::span<const Label> own_labels,
                                                  RefactorMode mode) const override {
    std::vector<RefactoringProposal> proposals;
    if (mode == RefactorMode::FixMissedFail || mode == RefactorMode::All) {
      for (const Label& label : own_labels) {
        proposals.push_back(
            propose_replace_forced_fail(label, ctx.model(), ctx.config(), ctx.project_root()));
      }
    } else if (mode == RefactorMode::Todo) {
      for (const Label& label : own_labels) {
        proposals.push_back(propose_todo_comment(label, ctx.model(), ctx.project_root()));
      }
    }
    return proposals;
  }
};

// ---------------------------------------------------------------------------

class SmokeAnalyzer final : public TestAnalyzer {
 public:
  std::string name() const override { return "smoke"; }

  std::any find_elements(AnalysisContext& ctx) const override {
    return std::make_pair(ctx.assertions().size(), ctx.helper_calls().size());
  }

  std::any dynamic_analysis(AnalysisContext&, const std::any&) const override {
    return std::any{};  // nothing dynamic about an empty test
  }

  std::vector<Label> label_test(AnalysisContext& ctx, const std::any& static_facts,
                                const std::any&) const override {
    auto [assertion_count, helper_count] =
        std::any_cast<std::pair<size_t, size_t>>(static_facts);
    if (assertion_count != 0 || helper_count != 0) return {};
    const Method* method = ctx.model().find_method(ctx.test().method_ref);
    return {make_label(ctx, Category::Smoke, "smoke", {evidence_for(method->loc, 0)})};
  }
};

// ---------------------------------------------------------------------------

struct BranchFacts {
  ElementId conditional = 0;
  std::vector<const AssertionCallSite*> then_assertions, else_assertions;
  std::vector<const HelperCallSite*> then_helpers, else_helpers;
  ElementId then_block = 0, else_block = 0;
};

class BothBranchesAnalyzer final : public TestAnalyzer {
 public:
  std::string name() const override { return "both-branches"; }

  std::any find_elements(AnalysisContext& ctx) const override {
    // conditionals of the test body with a plain else branch and validation
    // sites in both branches
    std::vector<BranchFacts> facts;
    const Method* method = ctx.model().find_method(ctx.test().method_ref);
    if (method == nullptr) return facts;
    walk_statements(method->body, [&](const Statement& stmt) {
      if (stmt.kind != StatementKind::Conditional || stmt.children.size() < 2) return;
      const Statement& then_block = stmt.children[0];
      const Statement& else_block = stmt.children[1];
      // an elif chain is not a plain else branch
      if (else_block.children.size() == 1 &&
          else_block.children[0].kind == StatementKind::Conditional &&
          else_block.children[0].loc.line == else_block.loc.line) {
        return;
      }
      BranchFacts f;
      f.conditional = stmt.loc.element_id;
      f.then_block = then_block.loc.element_id;
      f.else_block = else_block.loc.element_id;
      for (const auto& site : ctx.assertions()) {
        if (under(site.context_chain, f.then_block)) f.then_assertions.push_back(&site);
        if (under(site.context_chain, f.else_block)) f.else_assertions.push_back(&site);
      }
      for (const auto& site : ctx.helper_calls()) {
        if (under(site.context_chain, f.then_block)) f.then_helpers.push_back(&site);
        if (under(site.context_chain, f.else_block)) f.else_helpers.push_back(&site);
      }
      if ((f.then_assertions.empty() && f.then_helpers.empty()) ||
          (f.else_assertions.empty() && f.else_helpers.empty())) {
        return;
      }
      facts.push_back(std::move(f));
    });
    return facts;
  }

  std::any dynamic_analysis(AnalysisContext& ctx, const std::any& static_facts) const override {
    const auto& facts = std::any_cast<const std::vector<BranchFacts>&>(static_facts);
    std::vector<ElementId> ids;
    for (const auto& f : facts) {
      ids.push_back(f.then_block);
      ids.push_back(f.else_block);
      for (const auto* s : f.then_assertions) ids.push_back(s->site.element_id);
      for (const auto* s : f.else_assertions) ids.push_back(s->site.element_id);
      for (const auto* s : f.then_helpers) ids.push_back(s->site.element_id);
      for (const auto* s : f.else_helpers) ids.push_back(s->site.element_id);
    }
    return collect_hits(ctx, ids);
  }

  std::vector<Label> label_test(AnalysisContext& ctx, const std::any& static_facts,
                                const std::any& dynamic_facts) const override {
    const auto& facts = std::any_cast<const std::vector<BranchFacts>&>(static_facts);
    const auto& hits = std::any_cast<const HitMap&>(dynamic_facts);
    auto positive = [&](ElementId id) {
      auto it = hits.find(id);
      return it != hits.end() && it->second > 0;
    };
    std::vector<Label> labels;
    for (const auto& f : facts) {
      bool then_ran = positive(f.then_block);
      bool else_ran = positive(f.else_block);
      for (const auto* s : f.then_assertions) then_ran = then_ran || positive(s->site.element_id);
      for (const auto* s : f.then_helpers) then_ran = then_ran || positive(s->site.element_id);
      for (const auto* s : f.else_assertions) else_ran = else_ran || positive(s->site.element_id);
      for (const auto* s : f.else_helpers) else_ran = else_ran || positive(s->site.element_id);
      if (then_ran == else_ran) continue;  // both or neither: not this special case

      std::vector<EvidenceItem> evidence;
      auto add_unexecuted = [&](const SourceLocation& loc) {
        auto count = ctx.hits(loc.element_id);
        if (count.has_value() && *count == 0) {
          evidence.push_back(evidence_for(loc, 0));
          ctx.suppressed_sites.insert(loc.element_id);
        }
      };
      if (then_ran) {
        for (const auto* s : f.else_assertions) add_unexecuted(s->site);
        for (const auto* s : f.else_helpers) add_unexecuted(s->site);
      } else {
        for (const auto* s : f.then_assertions) add_unexecuted(s->site);
        for (const auto* s : f.then_helpers) add_unexecuted(s->site);
      }
      if (evidence.empty()) continue;
      std::sort(evidence.begin(), evidence.end(),
                [](const EvidenceItem& a, const EvidenceItem& b) { return a.element < b.element; });
      labels.push_back(make_label(ctx, Category::BothBranchesContextDependent, "both-branches",
                                  std::move(evidence)));
    }
    return labels;
  }

 private:
  static bool under(const std::vector<ContextEntry>& chain, ElementId block) {
    return std::any_of(chain.begin(), chain.end(),
                       [block](const ContextEntry& e) { return e.id == block; });
  }
};

// ---------------------------------------------------------------------------

class AssertionRottenAnalyzer final : public TestAnalyzer {
 public:
  std::string name() const override { return "assertion-rotten"; }

  std::any find_elements(AnalysisContext& ctx) const override {
    // forced-fail sites belong to the missed-fail analyzer
    std::vector<AssertionCallSite> sites;
    for (const auto& site : ctx.assertions()) {
      if (!site.is_forced_fail) sites.push_back(site);
    }
    return sites;
  }

  std::any dynamic_analysis(AnalysisContext& ctx, const std::any& static_facts) const override {
    const auto& sites = std::any_cast<const std::vector<AssertionCallSite>&>(static_facts);
    std::vector<ElementId> ids;
    for (const auto& site : sites) ids.push_back(site.site.element_id);
    return collect_hits(ctx, ids);
  }

  std::vector<Label> label_test(AnalysisContext& ctx, const std::any& static_facts,
                                const std::any& dynamic_facts) const override {
    const auto& sites = std::any_cast<const std::vector<AssertionCallSite>&>(static_facts);
    const auto& hits = std::any_cast<const HitMap&>(dynamic_facts);
    std::vector<Label> labels;
    for (const auto& site : sites) {
      if (ctx.suppressed_sites.count(site.site.element_id) != 0) continue;
      auto it = hits.find(site.site.element_id);
      if (it == hits.end() || it->second > 0) continue;  // untraced or executed
      Category category = chain_has_conditional(site.context_chain)
                              ? Category::ContextDependentAssertion
                              : Category::FullyRottenAssertion;
      labels.push_back(
          make_label(ctx, category, "assertion-rotten", {evidence_for(site.site, 0)}));
    }
    return labels;
  }
};

// ---------------------------------------------------------------------------

class HelperCallRottenAnalyzer final : public TestAnalyzer {
 public:
  std::string name() const override { return "helper-call-rotten"; }

  std::any find_elements(AnalysisContext& ctx) const override { return ctx.helper_calls(); }

  std::any dynamic_analysis(AnalysisContext& ctx, const std::any& static_facts) const override {
    const auto& sites = std::any_cast<const std::vector<HelperCallSite>&>(static_facts);
    std::vector<ElementId> ids;
    for (const auto& site : sites) ids.push_back(site.site.element_id);
    return collect_hits(ctx, ids);
  }

  std::vector<Label> label_test(AnalysisContext& ctx, const std::any& static_facts,
                                const std::any& dynamic_facts) const override {
    const auto& sites = std::any_cast<const std::vector<HelperCallSite>&>(static_facts);
    const auto& hits = std::any_cast<const HitMap&>(dynamic_facts);
    std::vector<Label> labels;
    for (const auto& site : sites) {
      if (ctx.suppressed_sites.count(site.site.element_id) != 0) continue;
      auto it = hits.find(site.site.element_id);
      if (it == hits.end() || it->second > 0) continue;
      Category category = chain_has_conditional(site.context_chain)
                              ? Category::ContextDependentHelperCall
                              : Category::FullyRottenHelperCall;
      labels.push_back(
          make_label(ctx, category, "helper-call-rotten", {evidence_for(site.site, 0)}));
    }
    return labels;
  }
};

// ---------------------------------------------------------------------------

struct HelperAssertionFacts {
  HelperCallSite call;                        // first call site of this helper
  std::vector<AssertionCallSite> assertions;  // assertions written in the helper
};

class AssertionInHelperAnalyzer final : public TestAnalyzer {
 public:
  std::string name() const override { return "assertion-in-helper"; }

  std::any find_elements(AnalysisContext& ctx) const override {
    // one entry per distinct invoked helper, in first-call order
    std::vector<HelperAssertionFacts> facts;
    std::set<ElementId> seen;
    for (const auto& call : ctx.helper_calls()) {
      if (!seen.insert(call.callee_ref).second) continue;
      HelperAssertionFacts f;
      f.call = call;
      f.assertions = find_assertions(ctx.model(), call.callee_ref, ctx.config());
      facts.push_back(std::move(f));
    }
    return facts;
  }

  std::any dynamic_analysis(AnalysisContext& ctx, const std::any& static_facts) const override {
    const auto& facts = std::any_cast<const std::vector<HelperAssertionFacts>&>(static_facts);
    std::vector<ElementId> ids;
    for (const auto& f : facts) {
      ids.push_back(f.call.site.element_id);
      for (const auto& a : f.assertions) ids.push_back(a.site.element_id);
    }
    return collect_hits(ctx, ids);
  }

  std::vector<Label> label_test(AnalysisContext& ctx, const std::any& static_facts,
                                const std::any& dynamic_facts) const override {
    const auto& facts = std::any_cast<const std::vector<HelperAssertionFacts>&>(static_facts);
    const auto& hits = std::any_cast<const HitMap&>(dynamic_facts);
    auto count_of = [&](ElementId id) -> std::optional<std::uint64_t> {
      auto it = hits.find(id);
      if (it == hits.end()) return std::nullopt;
      return it->second;
    };
    std::vector<Label> labels;
    for (const auto& f : facts) {
      auto call_count = count_of(f.call.site.element_id);
      if (!call_count.has_value() || *call_count == 0) continue;  // unexecuted helper: other analyzer
      for (const auto& a : f.assertions) {
        auto assertion_count = count_of(a.site.element_id);
        if (!assertion_count.has_value() || *assertion_count > 0) continue;
        labels.push_back(make_label(ctx, Category::RottenAssertionInHelper, "assertion-in-helper",
                                    {evidence_for(f.call.site, *call_count),
                                     evidence_for(a.site, 0)}));
      }
    }
    return labels;
  }
};

// ---------------------------------------------------------------------------

class SkipAnalyzer final : public TestAnalyzer {
 public:
  std::string name() const override { return "skip"; }

  std::any find_elements(AnalysisContext& ctx) const override { return ctx.guards(); }

  std::any dynamic_analysis(AnalysisContext& ctx, const std::any& static_facts) const override {
    const auto& guards = std::any_cast<const std::vector<GuardReturn>&>(static_facts);
    std::vector<ElementId> ids;
    for (const auto& g : guards) {
      ids.push_back(g.return_site.element_id);
      for (const auto& site : g.below_sites) ids.push_back(site.element_id);
    }
    return collect_hits(ctx, ids);
  }

  std::vector<Label> label_test(AnalysisContext& ctx, const std::any& static_facts,
                                const std::any& dynamic_facts) const override {
    const auto& guards = std::any_cast<const std::vector<GuardReturn>&>(static_facts);
    const auto& hits = std::any_cast<const HitMap&>(dynamic_facts);
    std::vector<Label> labels;
    for (const auto& g : guards) {
      if (g.below_sites.empty()) continue;  // nothing skipped, nothing rotten
      auto ret = hits.find(g.return_site.element_id);
      if (ret == hits.end() || ret->second == 0) continue;
      bool all_below_unexecuted = true;
      for (const auto& site : g.below_sites) {
        auto it = hits.find(site.element_id);
        if (it == hits.end() || it->second > 0) {
          all_below_unexecuted = false;  // executed, or untraced (unknown)
          break;
        }
      }
      if (!all_below_unexecuted) continue;
      std::vector<EvidenceItem> evidence;
      evidence.push_back(evidence_for(g.return_site, ret->second));
      for (const auto& site : g.below_sites) evidence.push_back(evidence_for(site, 0));
      labels.push_back(make_label(ctx, Category::Skip, "skip", std::move(evidence)));
    }
    return labels;
  }
};

}  // namespace

const std::vector<std::unique_ptr<TestAnalyzer>>& builtin_analyzers() {
  static const std::vector<std::unique_ptr<TestAnalyzer>> analyzers = [] {
    std::vector<std::unique_ptr<TestAnalyzer>> list;
    list.push_back(std::make_unique<MissedFailAnalyzer>());
    list.push_back(std::make_unique<SmokeAnalyzer>());
    list.push_back(std::make_unique<BothBranchesAnalyzer>());
    list.push_back(std::make_unique<AssertionRottenAnalyzer>());
    list.push_back(std::make_unique<HelperCallRottenAnalyzer>());
    list.push_back(std::make_unique<AssertionInHelperAnalyzer>());
    list.push_back(std::make_unique<SkipAnalyzer>());
    return list;
  }();
  return analyzers;
}

}  // namespace rtj
