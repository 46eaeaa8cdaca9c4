#pragma once
// Lexing and parsing as transducers, used to screen candidate code strings.
// The lexer maps character streams to token markers and echoes punctuation;
// the parser accepts the regular skeleton of the statement grammar over that
// marker stream. Their composition accepts a superset of the real language
// (parenthesis balance and keyword/identifier clashes are not tracked), so a
// word rejected here is definitely not code, and accepted words still go
// through the exact parser before being trusted.

#include <string>

#include "sea/alphabet.hpp"
#include "sea/sft.hpp"

namespace sea {

// Token markers live above the character range.
enum Marker : Sym {
  kMarkId = 256,
  kMarkInt,
  kMarkBool,
  kMarkAssign,
  kMarkRelop,
  kMarkAop,
  kMarkConc,
  kMarkAnd,
  kMarkNot,
  kMarkSep,
  kMarkLen,
  kMarkNum,
  kMarkSs,
  kMarkRand,
  kMarkReflect,
  kMarkSkip,
  kMarkIf,
  kMarkWhile,
};

namespace lexparse_detail {

inline std::set<Sym> letter_syms() {
  std::set<Sym> s;
  for (char c = 'a'; c <= 'z'; ++c) s.insert(Sym(c));
  for (char c = 'A'; c <= 'Z'; ++c) s.insert(Sym(c));
  s.insert(Sym('_'));
  return s;
}

inline std::set<Sym> digit_syms() {
  std::set<Sym> s;
  for (char c = '0'; c <= '9'; ++c) s.insert(Sym(c));
  return s;
}

inline std::set<Sym> word_syms() {
  auto s = letter_syms();
  for (Sym d : digit_syms()) s.insert(d);
  return s;
}

// Chain that consumes the literal `text` and emits `mark` on its last step.
inline void keyword_chain(Sft& t, uint32_t home, const std::string& text, Sym mark) {
  uint32_t at = home;
  for (size_t i = 0; i + 1 < text.size(); ++i) {
    uint32_t next = t.add_state();
    t.consume(at, {Sym(static_cast<unsigned char>(text[i]))}, next);
    at = next;
  }
  t.consume_emit(at, {Sym(static_cast<unsigned char>(text.back()))}, mark, home);
}

}  // namespace lexparse_detail

// Characters the lexer passes through unchanged. '(' is absent: opening
// parentheses only occur glued to len/num/ss/rand/reflect tokens.
inline const std::set<Sym>& punct_syms() {
  static const std::set<Sym> p{Sym(';'), Sym('{'), Sym('}'), Sym(')'), Sym('$')};
  return p;
}

inline Sft lex_sft() {
  using namespace lexparse_detail;
  Sft t;
  const uint32_t home = 0;
  t.accepting[home] = true;

  t.consume(home, {Sym(' ')}, home);
  for (Sym p : punct_syms()) t.copy(home, {p}, home);

  t.consume_emit(home, {Sym('='), Sym('<'), Sym('>')}, kMarkRelop, home);
  t.consume_emit(home, {Sym('+'), Sym('-'), Sym('*')}, kMarkAop, home);
  t.consume_emit(home, {Sym('.')}, kMarkConc, home);
  t.consume_emit(home, {Sym('&')}, kMarkAnd, home);
  t.consume_emit(home, {Sym('!')}, kMarkNot, home);
  t.consume_emit(home, {Sym(',')}, kMarkSep, home);

  keyword_chain(t, home, ":=", kMarkAssign);
  keyword_chain(t, home, "len(", kMarkLen);
  keyword_chain(t, home, "num(", kMarkNum);
  keyword_chain(t, home, "ss(", kMarkSs);
  keyword_chain(t, home, "rand()", kMarkRand);
  keyword_chain(t, home, "reflect(", kMarkReflect);
  keyword_chain(t, home, "skip", kMarkSkip);
  keyword_chain(t, home, "if", kMarkIf);
  keyword_chain(t, home, "while", kMarkWhile);
  keyword_chain(t, home, "true", kMarkBool);
  keyword_chain(t, home, "false", kMarkBool);

  uint32_t in_id = t.add_state();
  t.consume(home, letter_syms(), in_id);
  t.consume(in_id, word_syms(), in_id);
  t.eps_emit(in_id, kMarkId, home);

  uint32_t in_int = t.add_state();
  t.consume(home, digit_syms(), in_int);
  t.consume(in_int, digit_syms(), in_int);
  t.eps_emit(in_int, kMarkInt, home);

  return t;
}

// Regular skeleton of statement sequences over the marker alphabet:
//   program   = { statement ( ';' | '{' ) | ';' | '{' | '}' | '$' }
//   statement = SKIP
//             | ID ASSIGN [ REFLECT ] expr
//             | ( IF | WHILE | REFLECT ) expr
//   expr      = { prefix } operand { { ')' } binop { prefix } operand } { ')' }
//   prefix    = NOT | LEN | NUM | SS
//   operand   = ID | INT | BOOL | RAND
//   binop     = RELOP | AOP | CONC | AND | SEP
inline Sft parse_sft() {
  Sft t;
  const uint32_t between = 0;  // initial, accepting, sits between statements
  t.accepting[between] = true;
  uint32_t after_id = t.add_state();
  uint32_t after_assign = t.add_state();
  uint32_t expr_head = t.add_state();
  uint32_t after_operand = t.add_state();
  uint32_t stmt_done = t.add_state();

  for (Sym p : {Sym(';'), Sym('{'), Sym('}'), Sym('$')}) t.consume(between, {p}, between);

  t.consume(between, {kMarkSkip}, stmt_done);
  t.consume(between, {kMarkId}, after_id);
  t.consume(after_id, {kMarkAssign}, after_assign);
  t.eps_move(after_assign, expr_head);
  t.consume(after_assign, {kMarkReflect}, expr_head);
  t.consume(between, {kMarkIf, kMarkWhile, kMarkReflect}, expr_head);

  t.consume(expr_head, {kMarkNot, kMarkLen, kMarkNum, kMarkSs}, expr_head);
  t.consume(expr_head, {kMarkId, kMarkInt, kMarkBool, kMarkRand}, after_operand);
  t.consume(after_operand, {Sym(')')}, after_operand);
  t.consume(after_operand, {kMarkRelop, kMarkAop, kMarkConc, kMarkAnd, kMarkSep}, expr_head);
  t.eps_move(after_operand, stmt_done);

  t.consume(stmt_done, {Sym(';'), Sym('{')}, between);
  return t;
}

// Lexer and skeleton parser composed: accepts character strings that scan
// and fit the statement skeleton.
inline const Sft& code_screen_sft() {
  static const Sft composed = compose(lex_sft(), parse_sft());
  return composed;
}

inline bool screen_accepts(const std::string& s) {
  return sft_accepts(code_screen_sft(), str_syms(s));
}

}  // namespace sea
