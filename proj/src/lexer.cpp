#include "rtj/lexer.hpp"

#include <cctype>

#include "rtj/error.hpp"

namespace rtj {
namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Multi-character operators, longest first within each leading character.
const char* const kOperators[] = {
    "**=", "//=", ">>=", "<<=", "...", "!=", ">=", "<=", "==", "->", ":=", "+=", "-=",
    "*=",  "/=",  "%=",  "&=",  "|=",  "^=", "@=", "**", "//", ">>", "<<",
};

class Lexer {
 public:
  Lexer(const std::string& source, std::string file)
      : src_(source), file_(std::move(file)) {}

  std::vector<Token> run() {
    indents_.push_back(0);
    while (pos_ < src_.size()) {
      if (at_line_start_ && depth_ == 0) {
        handle_indentation();
        if (pos_ >= src_.size()) break;
      }
      lex_one();
    }
    if (emitted_on_line_) emit_layout(Token::Kind::Newline);
    while (indents_.size() > 1) {
      indents_.pop_back();
      emit_layout(Token::Kind::Dedent);
    }
    if (depth_ != 0) throw ParseError(file_, line_, col_, "unbalanced brackets at end of file");
    emit_layout(Token::Kind::EndOfFile);
    return std::move(tokens_);
  }

 private:
  char peek(size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void emit_layout(Token::Kind kind) {
    tokens_.push_back(Token{kind, "", line_, col_, line_, col_, "", false});
  }

  // Measures leading whitespace of the current physical line and emits
  // Indent/Dedent tokens. Blank and comment-only lines are skipped whole.
  void handle_indentation() {
    while (pos_ < src_.size()) {
      size_t scan = pos_;
      int width = 0;
      while (scan < src_.size() && (src_[scan] == ' ' || src_[scan] == '\t')) {
        width = src_[scan] == '\t' ? (width / 8 + 1) * 8 : width + 1;
        ++scan;
      }
      if (scan >= src_.size()) {
        while (pos_ < scan) advance();
        return;
      }
      if (src_[scan] == '\n' || src_[scan] == '\r' || src_[scan] == '#') {
        // skip the whole insignificant line
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
        if (pos_ < src_.size()) advance();
        continue;
      }
      while (pos_ < scan) advance();
      if (width > indents_.back()) {
        indents_.push_back(width);
        emit_layout(Token::Kind::Indent);
      } else {
        while (width < indents_.back()) {
          indents_.pop_back();
          emit_layout(Token::Kind::Dedent);
        }
        if (width != indents_.back()) {
          throw ParseError(file_, line_, col_, "inconsistent indentation");
        }
      }
      at_line_start_ = false;
      return;
    }
  }

  void lex_one() {
    char c = peek();
    if (c == '\n' || c == '\r') {
      int nl_line = line_, nl_col = col_;
      if (c == '\r') advance();
      if (peek() == '\n') advance();
      if (depth_ == 0) {
        if (emitted_on_line_) {
          tokens_.push_back(
              Token{Token::Kind::Newline, "", nl_line, nl_col, nl_line, nl_col, "", false});
          emitted_on_line_ = false;
        }
        at_line_start_ = true;
      }
      return;
    }
    if (c == ' ' || c == '\t') {
      advance();
      return;
    }
    if (c == '#') {
      while (pos_ < src_.size() && peek() != '\n') advance();
      return;
    }
    if (c == '\\' && (peek(1) == '\n' || (peek(1) == '\r' && peek(2) == '\n'))) {
      advance();
      if (peek() == '\r') advance();
      advance();
      return;
    }
    if (is_ident_start(c)) {
      lex_name_or_string();
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
      lex_number();
      return;
    }
    if (c == '\'' || c == '"') {
      lex_string("", line_, col_);
      return;
    }
    lex_operator();
  }

  void lex_name_or_string() {
    int start_line = line_, start_col = col_;
    std::string text;
    while (pos_ < src_.size() && is_ident_char(peek())) {
      text += peek();
      advance();
    }
    // string prefix? (r, b, f, u and two-letter combinations)
    if ((peek() == '\'' || peek() == '"') && text.size() <= 2) {
      bool prefix_ok = true;
      for (char p : text) {
        char low = static_cast<char>(std::tolower(static_cast<unsigned char>(p)));
        if (low != 'r' && low != 'b' && low != 'f' && low != 'u') prefix_ok = false;
      }
      if (prefix_ok) {
        lex_string(text, start_line, start_col);
        return;
      }
    }
    tokens_.push_back(Token{Token::Kind::Name, text, start_line, start_col, line_, col_, "", false});
    emitted_on_line_ = true;
  }

  void lex_string(const std::string& prefix, int start_line, int start_col) {
    bool raw = false, bytes = false, fstr = false;
    for (char p : prefix) {
      char low = static_cast<char>(std::tolower(static_cast<unsigned char>(p)));
      if (low == 'r') raw = true;
      if (low == 'b') bytes = true;
      if (low == 'f') fstr = true;
    }
    char quote = peek();
    std::string text = prefix;
    text += quote;
    advance();
    bool triple = peek() == quote && peek(1) == quote;
    if (triple) {
      text += quote;
      text += quote;
      advance();
      advance();
    }
    std::string value;
    while (true) {
      if (pos_ >= src_.size()) {
        throw ParseError(file_, start_line, start_col, "unterminated string literal");
      }
      char c = peek();
      if (!triple && (c == '\n' || c == '\r')) {
        throw ParseError(file_, start_line, start_col, "unterminated string literal");
      }
      if (c == '\\' && !raw) {
        advance();
        if (pos_ >= src_.size()) {
          throw ParseError(file_, start_line, start_col, "unterminated string literal");
        }
        char esc = peek();
        text += '\\';
        text += esc;
        switch (esc) {
          case 'n': value += '\n'; break;
          case 't': value += '\t'; break;
          case 'r': value += '\r'; break;
          case '0': value += '\0'; break;
          case '\\': value += '\\'; break;
          case '\'': value += '\''; break;
          case '"': value += '"'; break;
          case '\n': break;  // line continuation inside the literal
          default:
            value += '\\';
            value += esc;
        }
        advance();
        continue;
      }
      if (c == '\\' && raw) {
        text += c;
        value += c;
        advance();
        if (pos_ < src_.size()) {
          text += peek();
          value += peek();
          advance();
        }
        continue;
      }
      if (c == quote) {
        if (!triple) {
          text += c;
          advance();
          break;
        }
        if (peek(1) == quote && peek(2) == quote) {
          text += quote;
          text += quote;
          text += quote;
          advance();
          advance();
          advance();
          break;
        }
      }
      text += c;
      value += c;
      advance();
    }
    Token tok{Token::Kind::String, text, start_line, start_col, line_, col_, value,
              !bytes && !fstr};
    tokens_.push_back(std::move(tok));
    emitted_on_line_ = true;
  }

  void lex_number() {
    int start_line = line_, start_col = col_;
    std::string text;
    auto take = [&] {
      text += peek();
      advance();
    };
    if (peek() == '0' && (std::tolower(static_cast<unsigned char>(peek(1))) == 'x' ||
                          std::tolower(static_cast<unsigned char>(peek(1))) == 'o' ||
                          std::tolower(static_cast<unsigned char>(peek(1))) == 'b')) {
      take();
      take();
      while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) take();
    } else {
      while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '_')) take();
      if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
        take();
        while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '_')) take();
      } else if (peek() == '.' && !is_ident_start(peek(1))) {
        take();
      }
      if (std::tolower(static_cast<unsigned char>(peek())) == 'e' &&
          (std::isdigit(static_cast<unsigned char>(peek(1))) ||
           ((peek(1) == '+' || peek(1) == '-') && std::isdigit(static_cast<unsigned char>(peek(2)))))) {
        take();
        take();
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(peek()))) take();
      }
      if (std::tolower(static_cast<unsigned char>(peek())) == 'j') take();  // imaginary suffix
    }
    tokens_.push_back(Token{Token::Kind::Number, text, start_line, start_col, line_, col_, "", false});
    emitted_on_line_ = true;
  }

  void lex_operator() {
    int start_line = line_, start_col = col_;
    char c = peek();
    if (c == '(' || c == '[' || c == '{') ++depth_;
    if (c == ')' || c == ']' || c == '}') {
      if (depth_ == 0) throw ParseError(file_, line_, col_, "unbalanced closing bracket");
      --depth_;
    }
    std::string text(1, c);
    for (const char* op : kOperators) {
      size_t len = std::char_traits<char>::length(op);
      if (src_.compare(pos_, len, op) == 0) {
        text = op;
        break;
      }
    }
    for (size_t i = 0; i < text.size(); ++i) advance();
    tokens_.push_back(Token{Token::Kind::Op, text, start_line, start_col, line_, col_, "", false});
    emitted_on_line_ = true;
  }

  const std::string& src_;
  std::string file_;
  std::vector<Token> tokens_;
  std::vector<int> indents_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  int depth_ = 0;
  bool at_line_start_ = true;
  bool emitted_on_line_ = false;
};

}  // namespace

std::vector<Token> tokenize(const std::string& source, const std::string& file) {
  return Lexer(source, file).run();
}

}  // namespace rtj
