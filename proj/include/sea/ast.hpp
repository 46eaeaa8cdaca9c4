#pragma once
// AST for the analyzed language, plus the line-labeled control-flow form the
// interpreters run on and the printers that regenerate source listings.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace sea {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// One node type for the three syntactic sorts (arithmetic, boolean, string);
// values are dynamically typed sets, so sort errors surface at evaluation.
struct Expr {
  enum class Kind {
    IntLit,   // 42
    BoolLit,  // true, false
    StrLit,   // 'abc'
    Var,      // x
    Rand,     // rand()
    Len,      // len(s)
    Num,      // num(s)
    Substr,   // ss(s, n, m): 1-based start n, length m
    Binop,    // a op b with op in + - * = < > & .
    Not,      // !b
  };
  Kind kind;
  long long int_val = 0;
  bool bool_val = false;
  std::string str_val;  // StrLit text or Var name
  char op = 0;
  ExprPtr a, b, c;

  static ExprPtr lit(long long v) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::IntLit;
    e->int_val = v;
    return e;
  }
  static ExprPtr lit(bool v) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::BoolLit;
    e->bool_val = v;
    return e;
  }
  static ExprPtr str(std::string s) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::StrLit;
    e->str_val = std::move(s);
    return e;
  }
  static ExprPtr var(std::string name) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Var;
    e->str_val = std::move(name);
    return e;
  }
  static ExprPtr node(Kind k, ExprPtr a = nullptr, ExprPtr b = nullptr, ExprPtr c = nullptr) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->a = std::move(a);
    e->b = std::move(b);
    e->c = std::move(c);
    return e;
  }
  static ExprPtr binop(char op, ExprPtr a, ExprPtr b) {
    auto e = node(Kind::Binop, std::move(a), std::move(b));
    const_cast<Expr*>(e.get())->op = op;
    return e;
  }
};

struct Stmt {
  enum class Kind { Skip, Assign, If, While, Reflect, AssignReflect };
  Kind kind;
  std::string var;          // Assign / AssignReflect target
  ExprPtr expr;             // rhs, condition, or reflect argument
  std::vector<Stmt> body;   // If / While
};

// A statement list; the program terminator is implicit.
using Program = std::vector<Stmt>;

// ---- printing ----------------------------------------------------------

namespace ast_detail {

// Binding strength, loosest first: & then ! then relops then + - . then *.
inline int prec(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Binop:
      switch (e.op) {
        case '&':
          return 1;
        case '=':
        case '<':
        case '>':
          return 3;
        case '+':
        case '-':
        case '.':
          return 4;
        case '*':
          return 5;
      }
      return 6;
    case Expr::Kind::Not:
      return 2;
    default:
      return 6;
  }
}

}  // namespace ast_detail

// The grammar has no parentheses, so every expression the parser accepts
// prints back without them; nodes built programmatically may not round-trip.
inline std::string print_expr(const Expr& e) {
  using K = Expr::Kind;
  switch (e.kind) {
    case K::IntLit:
      return std::to_string(e.int_val);
    case K::BoolLit:
      return e.bool_val ? "true" : "false";
    case K::StrLit:
      return "'" + e.str_val + "'";
    case K::Var:
      return e.str_val;
    case K::Rand:
      return "rand()";
    case K::Len:
      return "len(" + print_expr(*e.a) + ")";
    case K::Num:
      return "num(" + print_expr(*e.a) + ")";
    case K::Substr:
      return "ss(" + print_expr(*e.a) + "," + print_expr(*e.b) + "," + print_expr(*e.c) + ")";
    case K::Not:
      return "!" + print_expr(*e.a);
    case K::Binop:
      return print_expr(*e.a) + e.op + print_expr(*e.b);
  }
  return "?";
}

inline void print_stmts(const Program& p, std::string indent, std::vector<std::string>& out) {
  for (const auto& s : p) {
    switch (s.kind) {
      case Stmt::Kind::Skip:
        out.push_back(indent + "skip;");
        break;
      case Stmt::Kind::Assign:
        out.push_back(indent + s.var + ":=" + print_expr(*s.expr) + ";");
        break;
      case Stmt::Kind::Reflect:
        out.push_back(indent + "reflect(" + print_expr(*s.expr) + ");");
        break;
      case Stmt::Kind::AssignReflect:
        out.push_back(indent + s.var + ":=reflect(" + print_expr(*s.expr) + ");");
        break;
      case Stmt::Kind::If:
      case Stmt::Kind::While: {
        const char* kw = s.kind == Stmt::Kind::If ? "if " : "while ";
        out.push_back(indent + kw + print_expr(*s.expr) + " {");
        print_stmts(s.body, indent + "  ", out);
        out.push_back(indent + "};");
        break;
      }
    }
  }
}

// Multi-line listing ending in the terminator line.
inline std::string pretty_print(const Program& p) {
  std::vector<std::string> lines;
  print_stmts(p, "", lines);
  lines.push_back("$");
  std::string out;
  for (const auto& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

// Single-line form, valid input for the parser.
inline std::string print_inline(const Program& p) {
  std::vector<std::string> lines;
  print_stmts(p, "", lines);
  std::string out;
  for (auto& l : lines) {
    while (!l.empty() && l.front() == ' ') l.erase(l.begin());
    out += l;
  }
  out += "$";
  return out;
}

// ---- structural comparison ---------------------------------------------

inline bool equal_expr(const Expr& x, const Expr& y) {
  if (x.kind != y.kind || x.op != y.op) return false;
  if (x.int_val != y.int_val || x.bool_val != y.bool_val || x.str_val != y.str_val) return false;
  auto sub = [](const ExprPtr& p, const ExprPtr& q) {
    if (!p || !q) return !p && !q;
    return equal_expr(*p, *q);
  };
  return sub(x.a, y.a) && sub(x.b, y.b) && sub(x.c, y.c);
}

inline bool equal_program(const Program& x, const Program& y) {
  if (x.size() != y.size()) return false;
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i].kind != y[i].kind || x[i].var != y[i].var) return false;
    bool has_x = x[i].expr != nullptr, has_y = y[i].expr != nullptr;
    if (has_x != has_y) return false;
    if (has_x && !equal_expr(*x[i].expr, *y[i].expr)) return false;
    if (!equal_program(x[i].body, y[i].body)) return false;
  }
  return true;
}

// ---- line-labeled form ---------------------------------------------------

// One control-flow line. Stores in both interpreters are indexed by these
// line numbers; a line's store describes memory just before it executes.
struct Line {
  enum class Kind { Skip, Assign, If, While, Reflect, AssignReflect, End };
  Kind kind;
  std::string var;
  ExprPtr expr;
  uint32_t next = 0;   // fallthrough successor
  uint32_t tsucc = 0;  // branch target when the condition holds
  uint32_t fsucc = 0;  // branch target when it does not
  std::string text;    // head of the statement, for reports
};

struct LabeledProgram {
  std::vector<Line> lines;  // index 0 unused; entry is line 1
  uint32_t entry = 1;
  uint32_t end_line = 1;
};

namespace ast_detail {

inline uint32_t count_lines(const Program& p) {
  uint32_t n = 0;
  for (const auto& s : p) n += 1 + count_lines(s.body);
  return n;
}

// Lays out statements at consecutive line numbers, bodies directly after
// their header. `after` is where control goes once the list finishes.
inline void lay_out(const Program& p, uint32_t first, uint32_t after,
                    std::vector<Line>& lines) {
  uint32_t at = first;
  for (const auto& s : p) {
    uint32_t body_lines = count_lines(s.body);
    uint32_t following = at + 1 + body_lines;
    uint32_t next_target = following;
    bool last = &s == &p.back();
    if (last) next_target = after;
    Line& ln = lines[at];
    ln.var = s.var;
    ln.expr = s.expr;
    switch (s.kind) {
      case Stmt::Kind::Skip:
        ln.kind = Line::Kind::Skip;
        ln.text = "skip;";
        ln.next = next_target;
        break;
      case Stmt::Kind::Assign:
        ln.kind = Line::Kind::Assign;
        ln.text = s.var + ":=" + print_expr(*s.expr) + ";";
        ln.next = next_target;
        break;
      case Stmt::Kind::Reflect:
        ln.kind = Line::Kind::Reflect;
        ln.text = "reflect(" + print_expr(*s.expr) + ");";
        ln.next = next_target;
        break;
      case Stmt::Kind::AssignReflect:
        ln.kind = Line::Kind::AssignReflect;
        ln.text = s.var + ":=reflect(" + print_expr(*s.expr) + ");";
        ln.next = next_target;
        break;
      case Stmt::Kind::If:
        ln.kind = Line::Kind::If;
        ln.text = "if " + print_expr(*s.expr) + " {";
        ln.tsucc = at + 1;
        ln.fsucc = next_target;
        lay_out(s.body, at + 1, next_target, lines);
        break;
      case Stmt::Kind::While:
        ln.kind = Line::Kind::While;
        ln.text = "while " + print_expr(*s.expr) + " {";
        ln.tsucc = at + 1;
        ln.fsucc = next_target;
        lay_out(s.body, at + 1, at, lines);  // body loops back to the header
        break;
    }
    at = following;
  }
}

}  // namespace ast_detail

inline LabeledProgram label(const Program& p) {
  LabeledProgram lp;
  uint32_t n = ast_detail::count_lines(p);
  lp.lines.resize(n + 2);
  lp.end_line = n + 1;
  Line& end = lp.lines[lp.end_line];
  end.kind = Line::Kind::End;
  end.text = "$";
  ast_detail::lay_out(p, 1, lp.end_line, lp.lines);
  return lp;
}

}  // namespace sea
