#pragma once
// Recursive-descent parser for the analyzed language. The same grammar
// serves source files, reflected string values, and synthesized programs;
// strictness about the terminator differs per entry point.

#include <cctype>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sea/ast.hpp"

namespace sea {

struct ParseError : std::runtime_error {
  int line, col;
  ParseError(int line, int col, const std::string& msg)
      : std::runtime_error("parse error at " + std::to_string(line) + ":" + std::to_string(col) +
                           ": " + msg),
        line(line),
        col(col) {}
};

struct ParseOptions {
  // Reject identifiers of the form g<digits>, which program synthesis uses
  // for fresh loop and branch guards. On for user-facing source files only;
  // reflected runtime values and synthesized programs may contain them.
  bool reject_guard_vars = false;
};

namespace parser_detail {

inline const std::vector<std::string>& keywords() {
  static const std::vector<std::string> kw = {"skip", "if",  "while", "true", "false",
                                              "reflect", "rand", "len", "num", "ss"};
  return kw;
}

inline bool is_keyword(const std::string& s) {
  for (const auto& k : keywords())
    if (k == s) return true;
  return false;
}

inline bool is_guard_name(const std::string& s) {
  if (s.size() < 2 || s[0] != 'g') return false;
  for (size_t i = 1; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

class Parser {
 public:
  Parser(const std::string& src, ParseOptions opts) : src_(src), opts_(opts) {}

  Program parse_program(bool require_terminator) {
    Program p = stmt_list();
    if (peek() == '$') {
      get();
      skip_ws();
      if (pos_ != src_.size()) fail("trailing input after terminator");
    } else if (require_terminator) {
      fail("expected terminator");
    } else {
      skip_ws();
      if (pos_ != src_.size()) fail("unparsable statement");
      if (p.empty()) fail("empty input");
    }
    return p;
  }

  ExprPtr parse_expression() {
    ExprPtr e = expr();
    skip_ws();
    if (pos_ != src_.size()) fail("trailing input after expression");
    return e;
  }

 private:
  const std::string& src_;
  ParseOptions opts_;
  size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) {
    int line = 1, col = 1;
    for (size_t i = 0; i < pos_ && i < src_.size(); ++i) {
      if (src_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(line, col, msg);
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  // One significant character ahead (whitespace skipped), 0 at end.
  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }
  char get() {
    char c = peek();
    if (pos_ < src_.size()) ++pos_;
    return c;
  }
  void expect(char c, const char* what) {
    if (peek() != c) fail(std::string("expected ") + what);
    ++pos_;
  }

  // Word starting at the cursor without consuming it; empty if none.
  std::string peek_word() {
    skip_ws();
    size_t i = pos_;
    std::string w;
    while (i < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[i])) || src_[i] == '_'))
      w.push_back(src_[i++]);
    return w;
  }

  std::string take_word() {
    std::string w = peek_word();
    pos_ += w.size();
    return w;
  }

  bool eat_word(const char* kw) {
    if (peek_word() != kw) return false;
    pos_ += std::string(kw).size();
    return true;
  }

  std::string ident() {
    std::string w = peek_word();
    if (w.empty() || std::isdigit(static_cast<unsigned char>(w[0])))
      fail("expected identifier");
    if (is_keyword(w)) fail("keyword used as identifier");
    if (opts_.reject_guard_vars && is_guard_name(w))
      fail("identifier " + w + " is reserved for synthesized guards");
    pos_ += w.size();
    return w;
  }

  Program stmt_list() {
    Program p;
    for (;;) {
      char c = peek();
      if (c == '\0' || c == '$' || c == '}') break;
      p.push_back(stmt());
    }
    return p;
  }

  Stmt stmt() {
    if (eat_word("skip")) {
      expect(';', "';' after skip");
      return {Stmt::Kind::Skip, {}, nullptr, {}};
    }
    if (eat_word("if")) return block(Stmt::Kind::If);
    if (eat_word("while")) return block(Stmt::Kind::While);
    if (eat_word("reflect")) {
      ExprPtr arg = call_arg();
      expect(';', "';' after reflect");
      return {Stmt::Kind::Reflect, {}, arg, {}};
    }
    std::string x = ident();
    // ':=' must be adjacent; a lone ':' or '=' is not assignment.
    skip_ws();
    if (pos_ + 1 >= src_.size() || src_[pos_] != ':' || src_[pos_ + 1] != '=')
      fail("expected ':=' after identifier");
    pos_ += 2;
    if (peek_word() == "reflect") {
      take_word();
      ExprPtr arg = call_arg();
      expect(';', "';' after reflect");
      return {Stmt::Kind::AssignReflect, x, arg, {}};
    }
    ExprPtr rhs = expr();
    expect(';', "';' after assignment");
    return {Stmt::Kind::Assign, x, rhs, {}};
  }

  Stmt block(Stmt::Kind kind) {
    ExprPtr cond = expr();
    expect('{', "'{'");
    Program body = stmt_list();
    if (body.empty()) fail("empty block");
    expect('}', "'}'");
    expect(';', "';' after '}'");
    return {kind, {}, cond, std::move(body)};
  }

  ExprPtr call_arg() {
    expect('(', "'('");
    ExprPtr e = expr();
    expect(')', "')'");
    return e;
  }

  // Precedence, loosest first: &, !, relational, additive (+ - .), *.
  ExprPtr expr() { return and_expr(); }

  ExprPtr and_expr() {
    ExprPtr e = not_expr();
    while (peek() == '&') {
      get();
      e = Expr::binop('&', e, not_expr());
    }
    return e;
  }

  ExprPtr not_expr() {
    if (peek() == '!') {
      get();
      return Expr::node(Expr::Kind::Not, not_expr());
    }
    return rel_expr();
  }

  ExprPtr rel_expr() {
    ExprPtr e = add_expr();
    char c = peek();
    if (c == '=' || c == '<' || c == '>') {
      get();
      return Expr::binop(c, e, add_expr());
    }
    return e;
  }

  ExprPtr add_expr() {
    ExprPtr e = mul_expr();
    for (;;) {
      char c = peek();
      if (c == '+' || c == '-') {
        get();
        e = Expr::binop(c, e, mul_expr());
      } else if (c == '.') {
        get();
        e = Expr::binop('.', e, mul_expr());
      } else if (concat_dot()) {
        e = Expr::binop('.', e, mul_expr());
      } else {
        break;
      }
    }
    return e;
  }

  // Middle dot U+00B7 as an alternative concatenation operator in files.
  bool concat_dot() {
    skip_ws();
    if (pos_ + 1 < src_.size() && static_cast<unsigned char>(src_[pos_]) == 0xC2 &&
        static_cast<unsigned char>(src_[pos_ + 1]) == 0xB7) {
      pos_ += 2;
      return true;
    }
    return false;
  }

  ExprPtr mul_expr() {
    ExprPtr e = atom();
    while (peek() == '*') {
      get();
      e = Expr::binop('*', e, atom());
    }
    return e;
  }

  ExprPtr atom() {
    char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string digits;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
        digits.push_back(src_[pos_++]);
      try {
        return Expr::lit(static_cast<long long>(std::stoll(digits)));
      } catch (const std::out_of_range&) {
        fail("integer literal out of range");
      }
    }
    if (c == '\'') {
      ++pos_;
      std::string s;
      while (pos_ < src_.size() && src_[pos_] != '\'') {
        char ch = src_[pos_];
        if (ch < 0x20 || ch > 0x7E) fail("string literal contains a character outside the alphabet");
        s.push_back(ch);
        ++pos_;
      }
      if (pos_ == src_.size()) fail("unterminated string literal");
      ++pos_;
      return Expr::str(std::move(s));
    }
    std::string w = peek_word();
    if (w == "true" || w == "false") {
      pos_ += w.size();
      return Expr::lit(w == "true");
    }
    if (w == "rand") {
      pos_ += w.size();
      expect('(', "'(' after rand");
      expect(')', "')'");
      return Expr::node(Expr::Kind::Rand);
    }
    if (w == "len" || w == "num") {
      pos_ += w.size();
      ExprPtr a = call_arg();
      return Expr::node(w == "len" ? Expr::Kind::Len : Expr::Kind::Num, a);
    }
    if (w == "ss") {
      pos_ += w.size();
      expect('(', "'(' after ss");
      ExprPtr s = expr();
      expect(',', "','");
      ExprPtr n = expr();
      expect(',', "','");
      ExprPtr m = expr();
      expect(')', "')'");
      return Expr::node(Expr::Kind::Substr, s, n, m);
    }
    return Expr::var(ident());
  }
};

}  // namespace parser_detail

// Source files and synthesized programs: statement list plus terminator.
inline Program parse_program(const std::string& src, ParseOptions opts = {}) {
  return parser_detail::Parser(src, opts).parse_program(true);
}

inline ExprPtr parse_expr(const std::string& src) {
  return parser_detail::Parser(src, {}).parse_expression();
}

// A runtime string denotes code when it parses as a full program (with
// terminator) or as a bare nonempty statement list. The empty string
// denotes nothing; the lone terminator denotes the empty program.
inline std::optional<Program> parse_code_value(const std::string& s) {
  bool blank = true;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
  if (blank) return std::nullopt;
  try {
    return parser_detail::Parser(s, {}).parse_program(true);
  } catch (const ParseError&) {
  }
  try {
    return parser_detail::Parser(s, {}).parse_program(false);
  } catch (const ParseError&) {
  }
  return std::nullopt;
}

inline bool is_executable(const std::string& s) { return parse_code_value(s).has_value(); }

// ---- statement-unit reparse -------------------------------------------
// Program synthesis slices candidate code into (word, punctuation) units.
// A unit is well formed exactly when the real grammar accepts it in the
// shape its punctuation promises.

enum class UnitKind { Empty, Simple, OpenIf, OpenWhile, Close, Terminator };

inline std::optional<UnitKind> classify_unit(const std::string& word, char punct) {
  auto try_parse = [](const std::string& text) -> bool {
    try {
      parser_detail::Parser p(text, {});
      Program prog = p.parse_program(false);
      return prog.size() == 1;
    } catch (const ParseError&) {
      return false;
    }
  };
  switch (punct) {
    case ';': {
      if (word.empty()) return UnitKind::Empty;  // stray ';' is tolerated
      if (!try_parse(word + ";")) return std::nullopt;
      return UnitKind::Simple;
    }
    case '{': {
      // 'if b {' / 'while b {': complete with an arbitrary body and check.
      if (try_parse(word + " {skip;};")) {
        std::string head = word;
        size_t i = 0;
        while (i < head.size() && std::isspace(static_cast<unsigned char>(head[i]))) ++i;
        if (head.compare(i, 2, "if") == 0) return UnitKind::OpenIf;
        return UnitKind::OpenWhile;
      }
      return std::nullopt;
    }
    case '}':
      return word.empty() ? std::optional<UnitKind>(UnitKind::Close) : std::nullopt;
    case '$':
      return word.empty() ? std::optional<UnitKind>(UnitKind::Terminator) : std::nullopt;
  }
  return std::nullopt;
}

}  // namespace sea
