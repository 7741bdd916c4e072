#include "rtj/frontend.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rtj/error.hpp"
#include "rtj/lexer.hpp"

namespace rtj {
namespace {

namespace fs = std::filesystem;

std::string last_segment(const std::string& dotted) {
  size_t dot = dotted.find_last_of('.');
  return dot == std::string::npos ? dotted : dotted.substr(dot + 1);
}

Literal literal_of(const Token& tok) {
  Literal lit;
  if (tok.kind == Token::Kind::Name) {
    if (tok.text == "True" || tok.text == "False") {
      lit.kind = Literal::Kind::Bool;
      lit.bool_value = tok.text == "True";
    } else if (tok.text == "None") {
      lit.kind = Literal::Kind::None;
    }
    return lit;
  }
  if (tok.kind == Token::Kind::String) {
    if (tok.foldable_string) {
      lit.kind = Literal::Kind::String;
      lit.string_value = tok.literal_value;
    }
    return lit;
  }
  if (tok.kind == Token::Kind::Number) {
    std::string digits;
    for (char c : tok.text) {
      if (c != '_') digits += c;
    }
    if (!digits.empty() && (digits.back() == 'j' || digits.back() == 'J')) return lit;  // complex
    try {
      if (digits.size() > 2 && digits[0] == '0' &&
          (digits[1] == 'x' || digits[1] == 'X' || digits[1] == 'o' || digits[1] == 'O' ||
           digits[1] == 'b' || digits[1] == 'B')) {
        int base = (digits[1] == 'x' || digits[1] == 'X') ? 16
                   : (digits[1] == 'o' || digits[1] == 'O') ? 8
                                                            : 2;
        lit.number_value = static_cast<double>(std::stoll(digits.substr(2), nullptr, base));
      } else {
        lit.number_value = std::stod(digits);
      }
      lit.kind = Literal::Kind::Number;
    } catch (const std::exception&) {
      lit.kind = Literal::Kind::NotALiteral;
    }
    return lit;
  }
  return lit;
}

int bracket_delta(const Token& tok) {
  if (tok.kind != Token::Kind::Op || tok.text.size() != 1) return 0;
  char c = tok.text[0];
  if (c == '(' || c == '[' || c == '{') return 1;
  if (c == ')' || c == ']' || c == '}') return -1;
  return 0;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::string path)
      : toks_(std::move(tokens)), path_(std::move(path)) {}

  Unit parse() {
    Unit unit;
    unit.path = path_;
    while (!at(Token::Kind::EndOfFile)) {
      if (at(Token::Kind::Newline) || at(Token::Kind::Dedent)) {
        next();
        continue;
      }
      if (at(Token::Kind::Indent)) {
        throw ParseError(path_, cur().line, cur().column, "unexpected indent");
      }
      std::vector<std::string> markers = parse_decorators();
      if (at_name("def") || (at_name("async") && peek_is_name("def"))) {
        unit.methods.push_back(parse_def("", markers));
      } else if (at_name("class")) {
        parse_class(unit);
      } else {
        parse_statement();  // module-level statement; not modeled
      }
    }
    return unit;
  }

 private:
  const Token& cur() const { return toks_[i_]; }
  const Token& peek(size_t ahead = 1) const {
    size_t j = i_ + ahead;
    return toks_[j < toks_.size() ? j : toks_.size() - 1];
  }
  bool at(Token::Kind k) const { return cur().kind == k; }
  bool at_name(const char* s) const { return cur().is_name(s); }
  bool at_op(const char* s) const { return cur().is_op(s); }
  bool peek_is_name(const char* s) const { return peek().is_name(s); }

  void next() {
    const Token& t = cur();
    if (t.kind == Token::Kind::Name || t.kind == Token::Kind::Number ||
        t.kind == Token::Kind::String || t.kind == Token::Kind::Op) {
      last_code_line_ = t.end_line;
    }
    if (i_ + 1 < toks_.size()) ++i_;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(path_, cur().line, cur().column, msg);
  }

  bool starts_own_line(const Token& t) const { return t.line != last_code_line_; }

  void expect_op(const char* s) {
    if (!at_op(s)) fail(std::string("expected '") + s + "'");
    next();
  }

  // Consumes header tokens up to (not including) the suite-introducing ':'
  // at bracket depth 0, appending them to out.
  void consume_until_colon(std::vector<Token>* out) {
    int depth = 0;
    while (true) {
      if (at(Token::Kind::Newline) || at(Token::Kind::EndOfFile)) {
        fail("expected ':' before end of line");
      }
      if (depth == 0 && at_op(":")) return;
      depth += bracket_delta(cur());
      if (out != nullptr) out->push_back(cur());
      next();
    }
  }

  // Consumes one simple-statement token run: up to a top-level ';' or the
  // logical end of line. Does not consume the terminator.
  std::vector<Token> consume_simple_tokens() {
    std::vector<Token> out;
    while (!at(Token::Kind::Newline) && !at(Token::Kind::EndOfFile) && !at_op(";")) {
      out.push_back(cur());
      next();
    }
    return out;
  }

  std::vector<std::string> parse_decorators() {
    std::vector<std::string> markers;
    while (at_op("@")) {
      next();
      std::string dotted;
      while (at(Token::Kind::Name)) {
        dotted += cur().text;
        next();
        if (at_op(".")) {
          dotted += '.';
          next();
        } else {
          break;
        }
      }
      // optional argument list
      if (at_op("(")) {
        int depth = 0;
        do {
          depth += bracket_delta(cur());
          next();
        } while (depth > 0 && !at(Token::Kind::EndOfFile));
      }
      markers.push_back(dotted);
      if (at(Token::Kind::Newline)) next();
    }
    return markers;
  }

  void parse_class(Unit& unit) {
    next();  // class
    if (!at(Token::Kind::Name)) fail("expected class name");
    std::string class_name = cur().text;
    next();
    consume_until_colon(nullptr);
    expect_op(":");
    if (!at(Token::Kind::Newline)) {
      // inline class body: nothing analyzable
      consume_simple_tokens();
      if (at(Token::Kind::Newline)) next();
      return;
    }
    next();
    if (!at(Token::Kind::Indent)) fail("expected indented class body");
    next();
    while (!at(Token::Kind::Dedent) && !at(Token::Kind::EndOfFile)) {
      if (at(Token::Kind::Newline)) {
        next();
        continue;
      }
      std::vector<std::string> markers = parse_decorators();
      if (at_name("def") || (at_name("async") && peek_is_name("def"))) {
        unit.methods.push_back(parse_def(class_name, markers));
      } else {
        parse_statement();
      }
    }
    if (at(Token::Kind::Dedent)) next();
  }

  Method parse_def(const std::string& class_prefix, std::vector<std::string> markers) {
    Method method;
    method.markers = std::move(markers);
    const Token& def_tok = cur();
    method.loc.line = def_tok.line;
    method.loc.column = def_tok.column;
    std::ostringstream sig;
    if (at_name("async")) {
      sig << "async ";
      next();
    }
    sig << "def ";
    next();  // def
    if (!at(Token::Kind::Name)) fail("expected function name");
    std::string simple = cur().text;
    sig << simple;
    next();
    std::vector<Token> header;
    consume_until_colon(&header);
    for (const auto& t : header) sig << t.text;
    expect_op(":");
    method.name = class_prefix.empty() ? simple : class_prefix + "." + simple;
    method.qualified = path_ + "::" +
                       (class_prefix.empty() ? simple : class_prefix + "::" + simple);
    method.signature = sig.str();
    method.body.kind = StatementKind::Block;
    method.body.loc.line = method.loc.line;
    method.body.loc.column = method.loc.column;
    method.body.own_line = true;
    parse_suite(method.body.children);
    return method;
  }

  // Parses the suite following a just-consumed ':'.
  void parse_suite(std::vector<Statement>& out) {
    if (at(Token::Kind::Newline)) {
      next();
      if (!at(Token::Kind::Indent)) fail("expected indented suite");
      next();
      while (!at(Token::Kind::Dedent) && !at(Token::Kind::EndOfFile)) {
        if (at(Token::Kind::Newline)) {
          next();
          continue;
        }
        out.push_back(parse_statement());
      }
      if (at(Token::Kind::Dedent)) next();
      return;
    }
    // inline suite: simple statements separated by ';'
    while (!at(Token::Kind::Newline) && !at(Token::Kind::EndOfFile)) {
      out.push_back(parse_simple_statement());
    }
    if (at(Token::Kind::Newline)) next();
  }

  Statement make_block(std::vector<Statement> children) {
    Statement block;
    block.kind = StatementKind::Block;
    if (!children.empty()) {
      block.loc.line = children.front().loc.line;
      block.loc.column = children.front().loc.column;
      block.end_line = children.front().loc.line;
      block.end_column = children.front().loc.column;
      block.own_line = children.front().own_line;
    }
    block.children = std::move(children);
    return block;
  }

  Statement parse_statement() {
    if (at_op("@")) {
      // decorated nested def/class: attributed to the enclosing method
      std::vector<std::string> markers = parse_decorators();
      (void)markers;
    }
    if (at_name("if")) return parse_conditional();
    if (at_name("for") || at_name("while")) return parse_loop(false);
    if (at_name("async") && peek_is_name("for")) return parse_loop(true);
    if (at_name("try")) return parse_try();
    if (at_name("with") || (at_name("async") && peek_is_name("with"))) return parse_with();
    if (at_name("def") || (at_name("async") && peek_is_name("def"))) return parse_nested_def();
    if (at_name("class")) return parse_nested_class();
    return parse_simple_statement();
  }

  Statement begin_statement(StatementKind kind) {
    Statement stmt;
    stmt.kind = kind;
    stmt.loc.line = cur().line;
    stmt.loc.column = cur().column;
    stmt.own_line = starts_own_line(cur());
    return stmt;
  }

  void end_statement_at_prev(Statement& stmt) {
    const Token& prev = toks_[i_ > 0 ? i_ - 1 : 0];
    stmt.end_line = prev.end_line;
    stmt.end_column = prev.end_column;
  }

  Statement parse_conditional() {
    Statement stmt = begin_statement(StatementKind::Conditional);
    next();  // if / elif
    consume_until_colon(nullptr);
    end_statement_at_prev(stmt);
    expect_op(":");
    std::vector<Statement> then_stmts;
    parse_suite(then_stmts);
    stmt.children.push_back(make_block(std::move(then_stmts)));
    if (at_name("elif")) {
      std::vector<Statement> chain;
      chain.push_back(parse_conditional());
      stmt.children.push_back(make_block(std::move(chain)));
    } else if (at_name("else")) {
      next();
      expect_op(":");
      std::vector<Statement> else_stmts;
      parse_suite(else_stmts);
      stmt.children.push_back(make_block(std::move(else_stmts)));
    }
    return stmt;
  }

  Statement parse_loop(bool async_prefix) {
    Statement stmt = begin_statement(StatementKind::Loop);
    if (async_prefix) next();
    next();  // for / while
    consume_until_colon(nullptr);
    end_statement_at_prev(stmt);
    expect_op(":");
    std::vector<Statement> body;
    parse_suite(body);
    stmt.children.push_back(make_block(std::move(body)));
    if (at_name("else")) {
      next();
      expect_op(":");
      std::vector<Statement> else_stmts;
      parse_suite(else_stmts);
      stmt.children.push_back(make_block(std::move(else_stmts)));
    }
    return stmt;
  }

  Statement parse_try() {
    Statement stmt = begin_statement(StatementKind::Block);
    next();  // try
    end_statement_at_prev(stmt);
    expect_op(":");
    std::vector<Statement> body;
    parse_suite(body);
    stmt.children.push_back(make_block(std::move(body)));
    while (at_name("except") || at_name("else") || at_name("finally")) {
      next();
      if (!at_op(":")) consume_until_colon(nullptr);
      expect_op(":");
      std::vector<Statement> clause;
      parse_suite(clause);
      stmt.children.push_back(make_block(std::move(clause)));
    }
    return stmt;
  }

  Statement parse_with() {
    Statement stmt = begin_statement(StatementKind::Block);
    if (at_name("async")) next();
    next();  // with
    consume_until_colon(nullptr);
    end_statement_at_prev(stmt);
    expect_op(":");
    parse_suite(stmt.children);
    return stmt;
  }

  // A def inside a method body: the closure's statements are attributed to
  // the enclosing method.
  Statement parse_nested_def() {
    Statement stmt = begin_statement(StatementKind::Block);
    if (at_name("async")) next();
    next();  // def
    if (at(Token::Kind::Name)) next();
    consume_until_colon(nullptr);
    end_statement_at_prev(stmt);
    expect_op(":");
    parse_suite(stmt.children);
    return stmt;
  }

  Statement parse_nested_class() {
    Statement stmt = begin_statement(StatementKind::Block);
    next();  // class
    if (at(Token::Kind::Name)) next();
    consume_until_colon(nullptr);
    end_statement_at_prev(stmt);
    expect_op(":");
    parse_suite(stmt.children);
    return stmt;
  }

  Statement parse_simple_statement() {
    if (at_name("return")) return parse_return();
    if (at_name("assert")) return parse_assert();
    Statement stmt = begin_statement(StatementKind::Other);
    std::vector<Token> tokens = consume_simple_tokens();
    end_statement_at_prev(stmt);
    finish_simple(stmt, tokens);
    return stmt;
  }

  Statement parse_return() {
    Statement stmt = begin_statement(StatementKind::Return);
    next();  // return
    consume_simple_tokens();
    end_statement_at_prev(stmt);
    consume_terminator_or_opaque_suite(stmt);
    return stmt;
  }

  Statement parse_assert() {
    Statement stmt = begin_statement(StatementKind::Call);
    next();  // assert
    std::vector<Token> tokens = consume_simple_tokens();
    end_statement_at_prev(stmt);
    stmt.call.callee = "assert";
    stmt.call.callee_last = "assert";
    // condition = tokens before the first top-level ',' (the optional message)
    std::vector<Token> condition;
    int depth = 0;
    for (const auto& t : tokens) {
      depth += bracket_delta(t);
      if (depth == 0 && t.is_op(",")) break;
      condition.push_back(t);
    }
    if (condition.size() == 1) {
      stmt.call.literal_args.push_back(literal_of(condition[0]));
    } else if (condition.size() == 3 && condition[1].is_op("==")) {
      Literal lhs = literal_of(condition[0]);
      Literal rhs = literal_of(condition[2]);
      if (lhs.is_literal() && rhs.is_literal()) {
        stmt.call.equality_form = true;
        stmt.call.literal_args.push_back(lhs);
        stmt.call.literal_args.push_back(rhs);
      } else {
        stmt.call.literal_args.push_back(Literal{});
      }
    } else {
      stmt.call.literal_args.push_back(Literal{});
    }
    consume_terminator_or_opaque_suite(stmt);
    return stmt;
  }

  // Classifies a token run as a whole-statement call or an opaque statement,
  // then consumes the terminator. A line ending in ':' whose suite we do not
  // model (match statements and friends) is swallowed as one opaque node.
  void finish_simple(Statement& stmt, const std::vector<Token>& tokens) {
    if (!tokens.empty() && tokens[0].kind == Token::Kind::Name) {
      size_t j = 1;
      std::string dotted = tokens[0].text;
      while (j + 1 < tokens.size() && tokens[j].is_op(".") &&
             tokens[j + 1].kind == Token::Kind::Name) {
        dotted += '.';
        dotted += tokens[j + 1].text;
        j += 2;
      }
      if (j < tokens.size() && tokens[j].is_op("(")) {
        int depth = 0;
        size_t close = j;
        for (size_t k = j; k < tokens.size(); ++k) {
          depth += bracket_delta(tokens[k]);
          if (depth == 0) {
            close = k;
            break;
          }
        }
        if (depth == 0 && close == tokens.size() - 1) {
          stmt.kind = StatementKind::Call;
          stmt.call.callee = dotted;
          stmt.call.callee_last = last_segment(dotted);
          // top-level argument literals
          std::vector<std::vector<Token>> args;
          std::vector<Token> current;
          int d = 0;
          for (size_t k = j + 1; k < close; ++k) {
            d += bracket_delta(tokens[k]);
            if (d == 0 && tokens[k].is_op(",")) {
              args.push_back(current);
              current.clear();
            } else {
              current.push_back(tokens[k]);
            }
          }
          if (!current.empty()) args.push_back(current);
          for (const auto& arg : args) {
            stmt.call.literal_args.push_back(arg.size() == 1 ? literal_of(arg[0]) : Literal{});
          }
        }
      }
    }
    consume_terminator_or_opaque_suite(stmt);
  }

  // Consumes a ';' separator, or — when the logical line introduces a suite
  // we do not model (match statements and friends) — the newline plus the
  // whole indented block as one opaque node. A plain end-of-line is left for
  // the enclosing suite loop.
  void consume_terminator_or_opaque_suite(Statement& stmt) {
    if (at_op(";")) {
      next();
      return;
    }
    if (at(Token::Kind::Newline) && peek().kind == Token::Kind::Indent) {
      next();
      stmt.kind = StatementKind::Other;
      stmt.call = CallInfo{};
      int depth = 0;
      do {
        if (at(Token::Kind::Indent)) ++depth;
        if (at(Token::Kind::Dedent)) --depth;
        if (at(Token::Kind::EndOfFile)) fail("unterminated block");
        next();
      } while (depth > 0);
    }
  }

  std::vector<Token> toks_;
  std::string path_;
  size_t i_ = 0;
  int last_code_line_ = 0;
};

bool is_assertion_call(const Statement& stmt, const FrontendConfig& config) {
  return stmt.kind == StatementKind::Call &&
         config.matches_assertion_rule(stmt.call.callee, stmt.call.callee_last);
}

bool compute_forced_fail(const CallInfo& call) {
  const auto& args = call.literal_args;
  if (call.equality_form) {
    return args.size() == 2 && args[0].is_literal() && args[1].is_literal() &&
           !args[0].equals(args[1]);
  }
  if (args.size() == 1) {
    return args[0].kind == Literal::Kind::Bool && !args[0].bool_value;
  }
  // name-based equality assertion over two unequal literals
  std::string lowered;
  for (char c : call.callee_last) lowered += static_cast<char>(std::tolower(c));
  if (args.size() == 2 && lowered.find("equal") != std::string::npos) {
    return args[0].is_literal() && args[1].is_literal() && !args[0].equals(args[1]);
  }
  return false;
}

// Visits statements of a method body with the chain of enclosing
// conditional/loop/block ancestors (body root excluded).
template <typename Fn>
void walk_with_chain(const Statement& body, Fn&& fn) {
  std::vector<ContextEntry> chain;
  auto recurse = [&](auto&& self, const Statement& node) -> void {
    fn(node, chain);
    if (node.children.empty()) return;
    chain.push_back({node.kind, node.loc.element_id});
    for (const auto& child : node.children) self(self, child);
    chain.pop_back();
  };
  for (const auto& child : body.children) recurse(recurse, child);
}

const Method& resolve_method(const ProgramModel& model, ElementId method) {
  const Method* found = model.find_method(method);
  if (found == nullptr) {
    throw UnknownElement("no method with element id " + std::to_string(method));
  }
  return *found;
}

bool method_is_test_marked(const Method& method, const FrontendConfig& config) {
  return !config.match_marker(last_segment(method.name), method.markers).empty();
}

bool method_is_assertion_named(const Method& method, const FrontendConfig& config) {
  return config.matches_assertion_rule(method.name, last_segment(method.name));
}

}  // namespace

Unit parse_unit(const std::string& source, const std::string& path) {
  return Parser(tokenize(source, path), path).parse();
}

ProgramModel build_model(const FrontendConfig& config) {
  const fs::path& root = config.project_root;
  if (!fs::exists(root) || !fs::is_directory(root)) {
    throw ProjectNotFound("project root not found: " + root.string());
  }
  std::vector<fs::path> files;
  for (auto it = fs::recursive_directory_iterator(root);
       it != fs::recursive_directory_iterator(); ++it) {
    const fs::path& p = it->path();
    std::string name = p.filename().string();
    if (it->is_directory()) {
      if (name == "__pycache__" || (!name.empty() && name[0] == '.')) {
        it.disable_recursion_pending();
      }
      continue;
    }
    if (p.extension() == ".py" && name != "_rtj_probe_runtime.py") files.push_back(p);
  }
  if (files.empty()) {
    throw ProjectNotFound("no sources under project root: " + root.string());
  }
  std::sort(files.begin(), files.end());
  std::vector<Unit> units;
  for (const auto& file : files) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw IoError("cannot read " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string rel = fs::relative(file, root).generic_string();
    units.push_back(parse_unit(buf.str(), rel));
  }
  return ProgramModel(std::move(units));
}

std::vector<TestCase> find_test_cases(const ProgramModel& model, const FrontendConfig& config) {
  std::vector<TestCase> tests;
  for (const auto& unit : model.units()) {
    if (!config.is_test_file(unit.path)) continue;
    for (const auto& method : unit.methods) {
      std::string marker = config.match_marker(last_segment(method.name), method.markers);
      if (marker.empty()) continue;
      tests.push_back(TestCase{method.loc.element_id, method.qualified, unit.path, marker});
    }
  }
  // units and methods are already ordered by (path, line)
  return tests;
}

std::vector<AssertionCallSite> find_assertions(const ProgramModel& model, ElementId method,
                                               const FrontendConfig& config) {
  const Method& m = resolve_method(model, method);
  std::vector<AssertionCallSite> sites;
  walk_with_chain(m.body, [&](const Statement& stmt, const std::vector<ContextEntry>& chain) {
    if (!is_assertion_call(stmt, config)) return;
    AssertionCallSite site;
    site.site = stmt.loc;
    site.callee_name = stmt.call.callee;
    site.is_forced_fail = compute_forced_fail(stmt.call);
    site.context_chain = chain;
    sites.push_back(std::move(site));
  });
  return sites;
}

ElementId resolve_callee(const ProgramModel& model, const std::string& unit_path,
                         const CallInfo& call) {
  const std::string& name = call.callee_last;
  if (name.empty()) return 0;
  ElementId same_unit = 0, global = 0;
  int same_unit_hits = 0, global_hits = 0;
  for (const auto& unit : model.units()) {
    for (const auto& method : unit.methods) {
      if (last_segment(method.name) != name) continue;
      ++global_hits;
      global = method.loc.element_id;
      if (unit.path == unit_path) {
        ++same_unit_hits;
        same_unit = method.loc.element_id;
      }
    }
  }
  if (same_unit_hits == 1) return same_unit;
  if (same_unit_hits == 0 && global_hits == 1) return global;
  return 0;
}

std::map<ElementId, int> detect_helpers(const ProgramModel& model, const FrontendConfig& config) {
  struct Info {
    const Method* method;
    const Unit* unit;
    bool candidate;
    bool direct_assert;
  };
  std::vector<Info> infos;
  std::unordered_map<ElementId, size_t> index;
  for (const auto& unit : model.units()) {
    for (const auto& method : unit.methods) {
      bool candidate =
          !method_is_test_marked(method, config) && !method_is_assertion_named(method, config);
      bool direct = false;
      walk_statements(method.body, [&](const Statement& s) {
        if (is_assertion_call(s, config)) direct = true;
      });
      index[method.loc.element_id] = infos.size();
      infos.push_back(Info{&method, &unit, candidate, direct});
    }
  }

  // reverse call edges: callee -> callers (candidates only propagate)
  std::unordered_map<ElementId, std::vector<ElementId>> callers;
  for (const auto& info : infos) {
    walk_statements(info.method->body, [&](const Statement& s) {
      if (s.kind != StatementKind::Call || is_assertion_call(s, config)) return;
      ElementId callee = resolve_callee(model, info.unit->path, s.call);
      if (callee != 0) callers[callee].push_back(info.method->loc.element_id);
    });
  }

  std::map<ElementId, int> depths;
  std::vector<ElementId> worklist;
  for (const auto& info : infos) {
    if (info.candidate && info.direct_assert) {
      depths[info.method->loc.element_id] = 0;
      worklist.push_back(info.method->loc.element_id);
    }
  }
  // breadth-first layering yields the least depth per method
  for (size_t head = 0; head < worklist.size(); ++head) {
    ElementId current = worklist[head];
    int depth = depths[current];
    auto it = callers.find(current);
    if (it == callers.end()) continue;
    for (ElementId caller : it->second) {
      const Info& info = infos[index[caller]];
      if (!info.candidate || depths.count(caller) != 0) continue;
      depths[caller] = depth + 1;
      worklist.push_back(caller);
    }
  }
  return depths;
}

std::vector<HelperCallSite> find_helper_calls(const ProgramModel& model, ElementId method,
                                              const std::map<ElementId, int>& helpers,
                                              const FrontendConfig& config) {
  const Method& m = resolve_method(model, method);
  std::vector<HelperCallSite> sites;
  walk_with_chain(m.body, [&](const Statement& stmt, const std::vector<ContextEntry>& chain) {
    if (stmt.kind != StatementKind::Call || is_assertion_call(stmt, config)) return;
    ElementId callee = resolve_callee(model, m.loc.file, stmt.call);
    auto it = callee == 0 ? helpers.end() : helpers.find(callee);
    if (it == helpers.end()) return;
    HelperCallSite site;
    site.site = stmt.loc;
    site.callee_ref = callee;
    site.transitive_depth = it->second;
    site.context_chain = chain;
    sites.push_back(std::move(site));
  });
  return sites;
}

std::vector<GuardReturn> find_guard_returns(const ProgramModel& model, ElementId method,
                                            const std::map<ElementId, int>& helpers,
                                            const FrontendConfig& config) {
  const Method& m = resolve_method(model, method);
  struct Site {
    int order;
    SourceLocation loc;
  };
  std::vector<Site> sites;
  for (const auto& a : find_assertions(model, method, config)) {
    sites.push_back({model.find_statement(a.site.element_id)->order_index, a.site});
  }
  for (const auto& h : find_helper_calls(model, method, helpers, config)) {
    sites.push_back({model.find_statement(h.site.element_id)->order_index, h.site});
  }
  std::sort(sites.begin(), sites.end(),
            [](const Site& a, const Site& b) { return a.order < b.order; });

  std::vector<GuardReturn> guards;
  walk_statements(m.body, [&](const Statement& stmt) {
    if (stmt.kind != StatementKind::Return) return;
    GuardReturn guard;
    guard.return_site = stmt.loc;
    for (const auto& site : sites) {
      if (site.order > stmt.order_index) guard.below_sites.push_back(site.loc);
    }
    guards.push_back(std::move(guard));
  });
  return guards;
}

}  // namespace rtj
