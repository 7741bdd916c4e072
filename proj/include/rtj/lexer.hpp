#pragma once

#include <string>
#include <vector>

namespace rtj {

/// Token stream over one source file of the analyzed host language.
/// Indentation is resolved here: the parser sees Indent/Dedent pairs and
/// logical Newline tokens (implicit continuations inside brackets and
/// backslash joins never surface).
struct Token {
  enum class Kind { Name, Number, String, Op, Newline, Indent, Dedent, EndOfFile };
  Kind kind;
  std::string text;  // raw source text (ops/names/numbers); empty for layout tokens
  int line = 0;      // 1-based
  int column = 0;    // 1-based
  int end_line = 0;
  int end_column = 0;  // one past the last character

  // String payload; literal_value is the decoded value, usable for the
  // constant fold only when foldable (plain string, no interpolation/bytes).
  std::string literal_value;
  bool foldable_string = false;

  bool is(Kind k) const { return kind == k; }
  bool is_name(const char* s) const { return kind == Kind::Name && text == s; }
  bool is_op(const char* s) const { return kind == Kind::Op && text == s; }
};

/// Tokenizes a whole file. Throws ParseError on unterminated strings,
/// inconsistent dedents, or unbalanced brackets at end of file.
std::vector<Token> tokenize(const std::string& source, const std::string& file);

}  // namespace rtj
