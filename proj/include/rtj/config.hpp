#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace rtj {

/// Recognition rules for the analyzed host framework. Defaults target pytest;
/// every rule is overridable through `rtj.conf` at the project root.
///
/// Marker rule forms:
///   name:<glob>       matches the method's simple name (e.g. "name:test_*")
///   decorator:<glob>  matches a decorator's dotted text (e.g. "decorator:pytest.mark.*")
/// Marker rules apply only to methods in units whose basename matches one of
/// test_file_globs (the framework's collection rule).
///
/// Assertion name rules are globs matched against a call statement's dotted
/// callee text and against its last segment; the bare `assert` statement is
/// modeled as a call with callee name "assert".
struct FrontendConfig {
  std::filesystem::path project_root;
  std::vector<std::string> test_file_globs = {"test_*.py", "*_test.py"};
  std::vector<std::string> test_marker_rules = {"name:test_*"};
  std::vector<std::string> assertion_name_rules = {"assert*"};
  std::string fail_primitive_name = "pytest.fail";

  bool is_test_file(const std::string& relative_path) const;
  /// The first marker rule matched by (method name, markers), or "" if none.
  std::string match_marker(const std::string& method_simple_name,
                           const std::vector<std::string>& markers) const;
  bool matches_assertion_rule(const std::string& callee,
                              const std::string& callee_last) const;
};

/// Shell-style glob match supporting `*` and `?` (no character classes).
bool glob_match(const std::string& pattern, const std::string& text);

/// Loads rtj.conf from the project root when present, otherwise returns the
/// defaults. Recognized keys (repeatable except fail_primitive):
///   test_file, test_marker, assertion_name, fail_primitive
FrontendConfig load_config(const std::filesystem::path& project_root);

}  // namespace rtj
