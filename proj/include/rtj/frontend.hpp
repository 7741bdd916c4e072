#pragma once

#include <map>
#include <string>
#include <vector>

#include "rtj/config.hpp"
#include "rtj/model.hpp"

namespace rtj {

/// An early-exit statement paired with the validation sites written after it.
struct GuardReturn {
  SourceLocation return_site;
  std::vector<SourceLocation> below_sites;  // assertion + helper-call sites, textual order
};

/// Parses one source file into a unit. `path` is kept as the unit path and
/// baked into the methods' qualified names (`path::name`, `path::Class::name`).
Unit parse_unit(const std::string& source, const std::string& path);

/// Builds the model for every source file under the project root.
/// Throws ProjectNotFound when the root is missing or holds no sources,
/// ParseError on the first file that fails to parse.
ProgramModel build_model(const FrontendConfig& config);

/// Methods matching a marker rule inside test files, in (path, line) order.
std::vector<TestCase> find_test_cases(const ProgramModel& model, const FrontendConfig& config);

/// Assertion call statements of one method. A call site is an assertion site
/// or a helper-call site, never both; assertion recognition wins.
/// Calls embedded in larger statements (assignments, conditions, arguments)
/// are not sites.
std::vector<AssertionCallSite> find_assertions(const ProgramModel& model, ElementId method,
                                               const FrontendConfig& config);

/// Least fixpoint of the helper relation: depth 0 methods contain a direct
/// assertion, depth n methods call a depth n-1 helper. Test-marked methods and
/// methods whose own name matches an assertion rule are never helpers.
std::map<ElementId, int> detect_helpers(const ProgramModel& model, const FrontendConfig& config);

/// Call statements of one method whose callee resolves to a helper.
std::vector<HelperCallSite> find_helper_calls(const ProgramModel& model, ElementId method,
                                              const std::map<ElementId, int>& helpers,
                                              const FrontendConfig& config);

/// Every return statement of the method, paired with the assertion/helper
/// sites whose textual-order index exceeds the return's.
std::vector<GuardReturn> find_guard_returns(const ProgramModel& model, ElementId method,
                                            const std::map<ElementId, int>& helpers,
                                            const FrontendConfig& config);

/// Project-local callee resolution for a call statement: matches the last
/// dotted segment against method simple names, same unit first, then a unique
/// project-wide match. Returns 0 when unresolved (external callee).
ElementId resolve_callee(const ProgramModel& model, const std::string& unit_path,
                         const CallInfo& call);

/// Pre-order walk over a statement subtree (the node itself included).
template <typename Fn>
void walk_statements(const Statement& root, Fn&& fn) {
  fn(root);
  for (const auto& child : root.children) walk_statements(child, fn);
}

}  // namespace rtj
