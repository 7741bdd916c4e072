#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace rtj {

/// Stable identifier of one model element (method or statement) within a build.
/// Id 0 is reserved as "invalid".
using ElementId = std::uint32_t;

struct SourceLocation {
  std::string file;  // relative to the project root
  int line = 0;      // 1-based
  int column = 0;    // 1-based
  ElementId element_id = 0;
};

enum class StatementKind { Call, Conditional, Loop, Return, Block, Other };

const char* to_string(StatementKind kind);

/// A literal argument recovered at parse time, used by the forced-fail fold.
struct Literal {
  enum class Kind { NotALiteral, Bool, Number, String, None };
  Kind kind = Kind::NotALiteral;
  bool bool_value = false;
  double number_value = 0.0;
  std::string string_value;

  bool is_literal() const { return kind != Kind::NotALiteral; }
  bool equals(const Literal& other) const;
};

/// Payload of a Call statement: an assert statement (callee "assert") or an
/// expression statement that is a single call.
struct CallInfo {
  std::string callee;       // dotted text as written, e.g. "pytest.fail" or "assert"
  std::string callee_last;  // last dotted segment
  // Top-level arguments that fold to single-token literals; NotALiteral otherwise.
  std::vector<Literal> literal_args;
  // True when an assert condition has the shape `<literal> == <literal>`;
  // literal_args then holds both operands.
  bool equality_form = false;
};

struct Statement {
  StatementKind kind = StatementKind::Other;
  SourceLocation loc;
  int end_line = 0;  // last token of the statement header / simple statement
  int end_column = 0;  // 1-based column one past the last character
  int order_index = 0;  // textual (pre-order) index within the enclosing method
  bool own_line = true;  // statement starts the first code on its physical line
  CallInfo call;         // meaningful only for kind == Call
  std::vector<Statement> children;
};

struct Method {
  std::string name;       // simple name, or "Class.name" for class methods
  std::string qualified;  // host-framework id, e.g. "tests/test_x.py::test_a"
  std::string signature;  // the def header text
  std::vector<std::string> markers;  // decorator texts, e.g. "pytest.mark.skip"
  SourceLocation loc;     // position of the def keyword
  Statement body;         // kind Block; children are the method statements
};

struct Unit {
  std::string path;  // relative to the project root
  std::vector<Method> methods;
};

/// Immutable program model. Construction assigns deterministic element ids
/// (units in sorted path order, methods in source order, statements pre-order)
/// and builds the id indexes; afterwards the model is safe to share across
/// threads for reads.
class ProgramModel {
 public:
  ProgramModel() = default;
  explicit ProgramModel(std::vector<Unit> units);

  // The indexes point into units_; moves keep element addresses stable,
  // copies would not.
  ProgramModel(const ProgramModel&) = delete;
  ProgramModel& operator=(const ProgramModel&) = delete;
  ProgramModel(ProgramModel&&) = default;
  ProgramModel& operator=(ProgramModel&&) = default;

  const std::vector<Unit>& units() const { return units_; }

  const Method* find_method(ElementId id) const;
  const Statement* find_statement(ElementId id) const;
  /// Enclosing method of a statement id (or the method itself for a method id).
  const Method* owner_of(ElementId id) const;
  /// Method whose body contains no element with this id -> nullptr.
  const Method* method_by_qualified_name(const std::string& qualified) const;

  /// Ancestor chain of a statement within its method, method root first,
  /// excluding the body root and the statement itself.
  std::vector<const Statement*> ancestors_of(ElementId id) const;

  ElementId max_element_id() const { return next_id_ - 1; }

 private:
  void index_statement(Statement& stmt, const std::string& file, const Method* owner);

  std::vector<Unit> units_;
  ElementId next_id_ = 1;
  std::unordered_map<ElementId, const Statement*> statements_;
  std::unordered_map<ElementId, const Method*> methods_;
  std::unordered_map<ElementId, const Method*> owners_;
  std::unordered_map<ElementId, ElementId> parent_;  // statement -> parent statement (0 = body root)
};

struct TestCase {
  ElementId method_ref = 0;
  std::string name;  // qualified name, doubles as the runner's test filter
  std::string unit;  // file path relative to the project root
  std::string marker;  // the rule that identified it, e.g. "name:test_*"
};

struct ContextEntry {
  StatementKind kind;
  ElementId id;
};

struct AssertionCallSite {
  SourceLocation site;
  std::string callee_name;
  bool is_forced_fail = false;
  std::vector<ContextEntry> context_chain;  // method root first, strict ancestors
};

struct HelperCallSite {
  SourceLocation site;
  ElementId callee_ref = 0;
  int transitive_depth = 0;  // call hops from the callee to the nearest assertion
  std::vector<ContextEntry> context_chain;
};

}  // namespace rtj
