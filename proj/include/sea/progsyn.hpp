#pragma once
// Assembles a single program out of a regular expression over statement
// units. Concatenation appends, alternation becomes a guarded if cascade,
// iteration becomes a guarded while loop; the guard variables are drawn from
// rand() so every original word stays a possible control path.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sea/ast.hpp"
#include "sea/parser.hpp"
#include "sea/regex.hpp"
#include "sea/stmsyn.hpp"

namespace sea {

struct UnbalancedBlocks : std::runtime_error {
  UnbalancedBlocks() : std::runtime_error("alternative opens or closes a block it does not own") {}
};

struct SynthesisResult {
  std::optional<Program> program;
  // Set when part of the language could not be assembled; the caller must
  // fall back to a coarser approximation for the affected variables.
  bool degraded = false;
};

namespace progsyn_detail {

struct Frame {
  bool is_while = false;
  ExprPtr cond;
  std::vector<Stmt> stmts;
};

// One alternative under assembly: a stack of open blocks plus the flag set
// once a terminator has sealed the branch.
struct Branch {
  std::vector<Frame> stack{Frame{}};
  bool truncated = false;
};

inline void flatten_alts(const RegexPtr& e, std::vector<RegexPtr>& out) {
  if (e->kind == Regex::Kind::Alt) {
    flatten_alts(e->a, out);
    flatten_alts(e->b, out);
  } else {
    out.push_back(e);
  }
}

// Top-level alternatives with concatenation distributed over alternation, so
// branches hidden behind shared prefixes or suffixes can be isolated. The
// expansion is capped; past the cap the expression stays in one piece.
inline std::vector<RegexPtr> top_alternatives(const RegexPtr& e, size_t cap = 16) {
  if (e->kind == Regex::Kind::Alt) {
    auto l = top_alternatives(e->a, cap);
    auto r = top_alternatives(e->b, cap);
    if (l.size() + r.size() > cap) return {e};
    l.insert(l.end(), r.begin(), r.end());
    return l;
  }
  if (e->kind == Regex::Kind::Cat) {
    auto l = top_alternatives(e->a, cap);
    auto r = top_alternatives(e->b, cap);
    if (l.size() * r.size() > cap) return {e};
    std::vector<RegexPtr> out;
    for (const auto& x : l)
      for (const auto& y : r) out.push_back(rx_cat(x, y));
    return out;
  }
  return {e};
}

inline void collect_atoms(const RegexPtr& e, std::vector<Sym>& out) {
  if (!e) return;
  if (e->kind == Regex::Kind::Atom) out.push_back(e->sym);
  collect_atoms(e->a, out);
  collect_atoms(e->b, out);
}

// Largest k such that some unit mentions an identifier g<k>, so synthesized
// guards never collide with variables of the code being covered.
inline int max_embedded_guard(const RegexPtr& root, const WordTable& units) {
  std::vector<Sym> atoms;
  collect_atoms(root, atoms);
  int best = 0;
  for (Sym s : atoms) {
    const std::string& w = units.word(s);
    for (size_t i = 0; i < w.size();) {
      unsigned char c = w[i];
      if (!std::isalpha(c) && c != '_') {
        ++i;
        continue;
      }
      size_t j = i;
      while (j < w.size() && (std::isalnum(static_cast<unsigned char>(w[j])) || w[j] == '_')) ++j;
      if (w[i] == 'g' && j > i + 1) {
        bool digits = true;
        for (size_t k = i + 1; k < j; ++k)
          if (!std::isdigit(static_cast<unsigned char>(w[k]))) digits = false;
        if (digits) best = std::max(best, std::stoi(w.substr(i + 1, j - i - 1)));
      }
      i = j;
    }
  }
  return best;
}

class Assembler {
 public:
  Assembler(const WordTable& units, int first_guard) : units_(units), next_guard_(first_guard) {}

  // Feeds one regex into the branch; throws UnbalancedBlocks when a nested
  // alternative or loop body cannot stand on its own.
  void emit(const RegexPtr& e, Branch& br) {
    if (br.truncated) return;
    switch (e->kind) {
      case Regex::Kind::Empty:
      case Regex::Kind::Eps:
        return;
      case Regex::Kind::Atom:
        feed_unit(units_.word(e->sym), br);
        return;
      case Regex::Kind::Cat:
        emit(e->a, br);
        emit(e->b, br);
        return;
      case Regex::Kind::Star: {
        std::string g = fresh_guard();
        std::vector<Stmt> body = assemble_closed(e->a);
        body.push_back(assign_rand(g));
        append(br, assign_rand(g));
        append(br, Stmt{Stmt::Kind::While, "", guard_eq(g), std::move(body)});
        return;
      }
      case Regex::Kind::Alt: {
        std::string g = fresh_guard();
        append(br, assign_rand(g));
        append(br, Stmt{Stmt::Kind::If, "", guard_eq(g, 1), assemble_closed(e->a)});
        append(br, Stmt{Stmt::Kind::If, "", guard_eq(g, 2), assemble_closed(e->b)});
        return;
      }
    }
  }

  // Assembles a sub-regex that must form a complete block body.
  std::vector<Stmt> assemble_closed(const RegexPtr& e) {
    Branch br;
    emit(e, br);
    std::vector<Stmt> stmts = finish(br);
    if (stmts.empty()) stmts.push_back(Stmt{Stmt::Kind::Skip});
    return stmts;
  }

  std::vector<Stmt> finish(Branch& br) {
    if (br.stack.size() != 1) throw UnbalancedBlocks();
    return std::move(br.stack.front().stmts);
  }

  std::string fresh_guard() { return "g" + std::to_string(next_guard_++); }

 private:

  static Stmt assign_rand(const std::string& g) {
    return Stmt{Stmt::Kind::Assign, g, Expr::node(Expr::Kind::Rand)};
  }
  static ExprPtr guard_eq(const std::string& g, long long v = 1) {
    return Expr::binop('=', Expr::var(g), Expr::lit(v));
  }

  void append(Branch& br, Stmt s) { br.stack.back().stmts.push_back(std::move(s)); }

  void feed_unit(const std::string& unit, Branch& br) {
    std::string word = unit.substr(0, unit.size() - 1);
    char punct = unit.back();
    auto kind = classify_unit(word, punct);
    if (!kind) throw UnbalancedBlocks();  // filtered automata never get here
    switch (*kind) {
      case UnitKind::Empty:
        return;
      case UnitKind::Simple: {
        Program p = parse_program(word + ";$");
        append(br, std::move(p.front()));
        return;
      }
      case UnitKind::OpenIf:
      case UnitKind::OpenWhile: {
        Program p = parse_program(word + " {skip;};$");
        Frame f;
        f.is_while = *kind == UnitKind::OpenWhile;
        f.cond = p.front().expr;
        br.stack.push_back(std::move(f));
        return;
      }
      case UnitKind::Close: {
        if (br.stack.size() == 1) throw UnbalancedBlocks();
        Frame f = std::move(br.stack.back());
        br.stack.pop_back();
        if (f.stmts.empty()) f.stmts.push_back(Stmt{Stmt::Kind::Skip});
        append(br, Stmt{f.is_while ? Stmt::Kind::While : Stmt::Kind::If, "", f.cond,
                        std::move(f.stmts)});
        return;
      }
      case UnitKind::Terminator:
        br.truncated = true;
        return;
    }
  }

  const WordTable& units_;
  int next_guard_;
};

}  // namespace progsyn_detail

namespace progsyn_detail {

// Assembles the given top-level alternatives, dropping the ones that fail to
// balance. Returns nothing when every alternative fails.
inline SynthesisResult assemble_alternatives(const std::vector<RegexPtr>& alts,
                                             const WordTable& units, int first_guard) {
  SynthesisResult res;
  Assembler as(units, first_guard);
  // The cascade guard is numbered before any guard inside the branches.
  std::string g = alts.size() > 1 ? as.fresh_guard() : "";

  std::vector<std::vector<Stmt>> bodies;
  for (const auto& alt : alts) {
    try {
      Branch br;
      as.emit(alt, br);
      bodies.push_back(as.finish(br));
    } catch (const UnbalancedBlocks&) {
      res.degraded = true;
    }
  }
  if (bodies.empty()) return res;

  if (alts.size() == 1) {
    res.program = std::move(bodies.front());
    return res;
  }
  Program p;
  p.push_back(Stmt{Stmt::Kind::Assign, g, Expr::node(Expr::Kind::Rand)});
  long long tag = 1;
  for (auto& body : bodies) {
    if (body.empty()) body.push_back(Stmt{Stmt::Kind::Skip});
    p.push_back(Stmt{Stmt::Kind::If, "", Expr::binop('=', Expr::var(g), Expr::lit(tag)),
                     std::move(body)});
    ++tag;
  }
  res.program = std::move(p);
  return res;
}

}  // namespace progsyn_detail

// Whole-language assembly. A failure to balance normally degrades the whole
// result, but top-level alternatives, including ones hidden behind shared
// prefixes or suffixes, are retried in isolation so the balanced part of the
// language still gets a program.
inline SynthesisResult synthesize(const RegexPtr& root, const WordTable& units) {
  SynthesisResult res;
  if (root->kind == Regex::Kind::Empty) return res;  // nothing executable, nothing to cover

  int first_guard = progsyn_detail::max_embedded_guard(root, units) + 1;

  // Alternation assembles binary and right-associated; a rand guard picks one
  // arm per if pair, so nested alternatives get nested guards.
  res = progsyn_detail::assemble_alternatives({root}, units, first_guard);
  if (!res.degraded) return res;

  std::vector<RegexPtr> spread = progsyn_detail::top_alternatives(root);
  if (spread.size() > 1)
    res = progsyn_detail::assemble_alternatives(spread, units, first_guard);
  res.degraded = true;
  return res;
}

}  // namespace sea
