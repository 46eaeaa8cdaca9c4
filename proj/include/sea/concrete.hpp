#pragma once
// Concrete semantics: a single-execution trace runner and the per-line
// collecting semantics whose iteration order is driven by that trace, the
// way the walkthrough tables unfold.

#include <cctype>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sea/ast.hpp"
#include "sea/parser.hpp"
#include "sea/values.hpp"

namespace sea {

struct TraceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TowerDivergence : TraceError {
  TowerDivergence() : TraceError("reflection tower exceeded the depth bound") {}
};
struct TraceBudget : TraceError {
  TraceBudget() : TraceError("execution exceeded the step budget") {}
};

// ---- single concrete values ---------------------------------------------

struct Value {
  enum class Kind { Int, Bool, Str };
  Kind kind = Kind::Int;
  long long i = 0;
  bool b = false;
  std::string s;

  static Value of(long long v) { return {Kind::Int, v, false, {}}; }
  static Value of(bool v) { return {Kind::Bool, 0, v, {}}; }
  static Value of(std::string v) { return {Kind::Str, 0, false, std::move(v)}; }
  friend bool operator==(const Value&, const Value&) = default;
};

using Env = std::map<std::string, Value>;
using RandFn = std::function<long long()>;

struct TraceLimits {
  size_t max_steps = 100000;
  uint32_t max_tower = 8;
};

namespace concrete_detail {

inline std::optional<long long> parse_numeral(const std::string& s) {
  if (s.empty()) return std::nullopt;
  size_t i = s[0] == '-' ? 1 : 0;
  if (i == s.size()) return std::nullopt;
  for (size_t k = i; k < s.size(); ++k)
    if (!std::isdigit(static_cast<unsigned char>(s[k]))) return std::nullopt;
  try {
    return std::stoll(s);
  } catch (const std::out_of_range&) {
    return std::nullopt;
  }
}

// true when a is a strict prefix of b
inline bool strict_prefix(const std::string& a, const std::string& b) {
  return a.size() < b.size() && b.compare(0, a.size(), a) == 0;
}

}  // namespace concrete_detail

// ---- trace evaluation -----------------------------------------------------

inline Value eval_value(const Expr& e, const Env& env, const RandFn& rand) {
  using K = Expr::Kind;
  auto want_int = [](const Value& v) {
    if (v.kind != Value::Kind::Int) throw TraceError("expected an integer value");
    return v.i;
  };
  auto want_str = [](const Value& v) {
    if (v.kind != Value::Kind::Str) throw TraceError("expected a string value");
    return v.s;
  };
  switch (e.kind) {
    case K::IntLit:
      return Value::of(e.int_val);
    case K::BoolLit:
      return Value::of(e.bool_val);
    case K::StrLit:
      return Value::of(e.str_val);
    case K::Var: {
      auto it = env.find(e.str_val);
      if (it == env.end()) throw TraceError("variable " + e.str_val + " is undefined");
      return it->second;
    }
    case K::Rand:
      return Value::of(rand());
    case K::Len:
      return Value::of(
          static_cast<long long>(want_str(eval_value(*e.a, env, rand)).size()));
    case K::Num: {
      auto n = concrete_detail::parse_numeral(want_str(eval_value(*e.a, env, rand)));
      if (!n) throw TraceError("num() argument is not a numeral");
      return Value::of(*n);
    }
    case K::Substr: {
      std::string s = want_str(eval_value(*e.a, env, rand));
      long long n = want_int(eval_value(*e.b, env, rand));
      long long m = want_int(eval_value(*e.c, env, rand));
      if (n < 1 || m < 0 || static_cast<long long>(s.size()) < n + m - 1)
        throw TraceError("substring window out of range");
      return Value::of(s.substr(static_cast<size_t>(n - 1), static_cast<size_t>(m)));
    }
    case K::Not: {
      Value v = eval_value(*e.a, env, rand);
      if (v.kind != Value::Kind::Bool) throw TraceError("expected a boolean value");
      return Value::of(!v.b);
    }
    case K::Binop: {
      Value l = eval_value(*e.a, env, rand), r = eval_value(*e.b, env, rand);
      switch (e.op) {
        case '+':
          return Value::of(values_detail::checked_add(want_int(l), want_int(r)));
        case '-':
          return Value::of(values_detail::checked_sub(want_int(l), want_int(r)));
        case '*':
          return Value::of(values_detail::checked_mul(want_int(l), want_int(r)));
        case '.':
          return Value::of(want_str(l) + want_str(r));
        case '&': {
          if (l.kind != Value::Kind::Bool || r.kind != Value::Kind::Bool)
            throw TraceError("expected boolean operands");
          return Value::of(l.b && r.b);
        }
        case '=':
        case '<':
        case '>': {
          if (l.kind == Value::Kind::Int && r.kind == Value::Kind::Int) {
            if (e.op == '=') return Value::of(l.i == r.i);
            if (e.op == '<') return Value::of(l.i < r.i);
            return Value::of(l.i > r.i);
          }
          if (l.kind == Value::Kind::Str && r.kind == Value::Kind::Str) {
            if (e.op == '=') return Value::of(l.s == r.s);
            if (e.op == '<') return Value::of(concrete_detail::strict_prefix(l.s, r.s));
            return Value::of(concrete_detail::strict_prefix(r.s, l.s));
          }
          throw TraceError("comparison between incompatible values");
        }
      }
      throw TraceError("unknown operator");
    }
  }
  throw TraceError("unknown expression");
}

// ---- collecting evaluation ------------------------------------------------

inline const ValueSet& lookup(const CMemory& m, const std::string& x) {
  static const ValueSet kEmpty{};
  auto it = m.find(x);
  return it == m.end() ? kEmpty : it->second;
}

inline ValueSet eval_set(const Expr& e, const CMemory& m, size_t concat_cap = 16384);

namespace concrete_detail {

inline BoolSet cmp_ints(char op, const IntSet& a, const IntSet& b) {
  BoolSet r;
  if (a.empty() || b.empty()) return r;
  if (op == '=') {
    r.t = !a.intersect(b).empty();
    bool a_single = a.min() && a.max() && *a.min() == *a.max();
    bool b_single = b.min() && b.max() && *b.min() == *b.max();
    r.f = !(a_single && b_single && *a.min() == *b.min());
    return r;
  }
  const IntSet& lo_side = op == '<' ? a : b;
  const IntSet& hi_side = op == '<' ? b : a;
  // exists x in lo_side, y in hi_side with x < y
  r.t = lo_side.unbounded_below() || hi_side.unbounded_above() ||
        *lo_side.min() < *hi_side.max();
  // exists x, y with x >= y
  r.f = lo_side.unbounded_above() || hi_side.unbounded_below() ||
        *lo_side.max() >= *hi_side.min();
  return r;
}

inline BoolSet cmp_strs(char op, const StrSet& a, const StrSet& b) {
  BoolSet r;
  for (const auto& x : a)
    for (const auto& y : b) {
      bool v;
      if (op == '=')
        v = x == y;
      else if (op == '<')
        v = strict_prefix(x, y);
      else
        v = strict_prefix(y, x);
      (v ? r.t : r.f) = true;
      if (r.t && r.f) return r;
    }
  return r;
}

}  // namespace concrete_detail

inline ValueSet eval_set(const Expr& e, const CMemory& m, size_t concat_cap) {
  using K = Expr::Kind;
  switch (e.kind) {
    case K::IntLit:
      return ValueSet::of_int(IntSet::point(e.int_val));
    case K::BoolLit:
      return ValueSet::of_bool(BoolSet::of(e.bool_val));
    case K::StrLit:
      return ValueSet::of_str({e.str_val});
    case K::Var:
      return lookup(m, e.str_val);
    case K::Rand:
      return ValueSet::of_int(IntSet::all());
    case K::Len: {
      ValueSet a = eval_set(*e.a, m, concat_cap);
      IntSet out;
      for (const auto& s : a.strs)
        out = out.unioned(IntSet::point(static_cast<long long>(s.size())));
      return ValueSet::of_int(out);
    }
    case K::Num: {
      ValueSet a = eval_set(*e.a, m, concat_cap);
      IntSet out;
      for (const auto& s : a.strs)
        if (auto n = concrete_detail::parse_numeral(s)) out = out.unioned(IntSet::point(*n));
      return ValueSet::of_int(out);
    }
    case K::Substr: {
      ValueSet sv = eval_set(*e.a, m, concat_cap);
      auto ns = eval_set(*e.b, m, concat_cap).ints.enumerate(1024);
      auto ms = eval_set(*e.c, m, concat_cap).ints.enumerate(1024);
      if (!ns || !ms) throw EvalLimit("substring indices over an unenumerable set");
      StrSet out;
      for (const auto& s : sv.strs)
        for (long long n : *ns)
          for (long long mm : *ms) {
            if (n < 1 || mm < 0 || static_cast<long long>(s.size()) < n + mm - 1) continue;
            out.insert(s.substr(static_cast<size_t>(n - 1), static_cast<size_t>(mm)));
          }
      return ValueSet::of_str(std::move(out));
    }
    case K::Not: {
      BoolSet b = eval_set(*e.a, m, concat_cap).bools;
      return ValueSet::of_bool({b.f, b.t});
    }
    case K::Binop: {
      ValueSet l = eval_set(*e.a, m, concat_cap), r = eval_set(*e.b, m, concat_cap);
      switch (e.op) {
        case '+':
          return ValueSet::of_int(l.ints.add(r.ints));
        case '-':
          return ValueSet::of_int(l.ints.sub(r.ints));
        case '*':
          return ValueSet::of_int(l.ints.mul(r.ints));
        case '.': {
          if (l.strs.size() * r.strs.size() > concat_cap)
            throw EvalLimit("concatenation set too large");
          StrSet out;
          for (const auto& x : l.strs)
            for (const auto& y : r.strs) out.insert(x + y);
          return ValueSet::of_str(std::move(out));
        }
        case '&': {
          BoolSet a = l.bools, b = r.bools, out;
          out.t = a.t && b.t;
          out.f = (a.f && !b.empty()) || (b.f && !a.empty());
          return ValueSet::of_bool(out);
        }
        case '=':
        case '<':
        case '>': {
          BoolSet out = concrete_detail::cmp_ints(e.op, l.ints, r.ints)
                            .unioned(concrete_detail::cmp_strs(e.op, l.strs, r.strs));
          return ValueSet::of_bool(out);
        }
      }
      return {};
    }
  }
  return {};
}

// ---- condition filters ----------------------------------------------------

namespace concrete_detail {

// Members of A that have a witness in B for the comparison outcome.
inline IntSet restrict_ints(const IntSet& a, char op, bool left, bool outcome, const IntSet& b) {
  if (a.empty() || b.empty()) return {};
  // Normalize to the question: keep x such that exists y in B with x REL y,
  // where REL is op oriented so that x is the left operand.
  char rel = op;
  if (!left && op != '=') rel = op == '<' ? '>' : '<';
  constexpr long long kMin = std::numeric_limits<long long>::min();
  constexpr long long kMax = std::numeric_limits<long long>::max();
  if (!outcome) {
    if (rel == '=') {
      bool b_single = b.min() && b.max() && *b.min() == *b.max();
      if (!b_single) return a;
      long long v = *b.min();
      IntSet keep;
      if (v != kMin) keep = keep.unioned(IntSet::range(std::nullopt, v - 1));
      if (v != kMax) keep = keep.unioned(IntSet::range(v + 1, std::nullopt));
      return a.intersect(keep);
    }
    // not (x < y) has a witness iff exists y with x >= y, and dually
    rel = rel == '<' ? 'g' : 'l';  // g: x >= some y; l: x <= some y
  }
  switch (rel) {
    case '=':
      return a.intersect(b);
    case '<':  // x < some y: x <= max(B) - 1
      if (b.unbounded_above()) return a;
      if (*b.max() == kMin) return {};
      return a.intersect(IntSet::range(std::nullopt, *b.max() - 1));
    case '>':  // x > some y
      if (b.unbounded_below()) return a;
      if (*b.min() == kMax) return {};
      return a.intersect(IntSet::range(*b.min() + 1, std::nullopt));
    case 'g':  // x >= some y
      return b.unbounded_below() ? a : a.intersect(IntSet::range(*b.min(), std::nullopt));
    case 'l':  // x <= some y
      return b.unbounded_above() ? a : a.intersect(IntSet::range(std::nullopt, *b.max()));
  }
  return a;
}

inline StrSet restrict_strs(const StrSet& a, char op, bool left, bool outcome, const StrSet& b) {
  StrSet out;
  for (const auto& x : a) {
    bool keep = false;
    for (const auto& y : b) {
      const std::string& l = left ? x : y;
      const std::string& r = left ? y : x;
      bool v;
      if (op == '=')
        v = l == r;
      else if (op == '<')
        v = strict_prefix(l, r);
      else
        v = strict_prefix(r, l);
      if (v == outcome) {
        keep = true;
        break;
      }
    }
    if (keep) out.insert(x);
  }
  return out;
}

}  // namespace concrete_detail

// Restricts m to memories that can satisfy (or falsify) the condition; only
// bare-variable comparison sides are narrowed, which matches the abstract
// filter's strength. Returns nullopt when the polarity is infeasible.
inline std::optional<CMemory> filter_condition(const Expr& b, const CMemory& m, bool polarity,
                                               size_t concat_cap = 16384) {
  using K = Expr::Kind;
  switch (b.kind) {
    case K::BoolLit:
      if (b.bool_val == polarity) return m;
      return std::nullopt;
    case K::Not:
      return filter_condition(*b.a, m, !polarity, concat_cap);
    case K::Var: {
      const ValueSet& v = lookup(m, b.str_val);
      if (!(polarity ? v.bools.t : v.bools.f)) return std::nullopt;
      CMemory out = m;
      ValueSet nv = v;
      nv.bools = BoolSet::of(polarity);
      nv.ints = {};
      nv.strs = {};
      out[b.str_val] = nv;
      return out;
    }
    case K::Binop:
      if (b.op == '&') {
        if (polarity) {
          auto m1 = filter_condition(*b.a, m, true, concat_cap);
          if (!m1) return std::nullopt;
          return filter_condition(*b.b, *m1, true, concat_cap);
        }
        auto m1 = filter_condition(*b.a, m, false, concat_cap);
        auto m2 = filter_condition(*b.b, m, false, concat_cap);
        if (!m1) return m2;
        if (!m2) return m1;
        return join(*m1, *m2);
      }
      if (b.op == '=' || b.op == '<' || b.op == '>') {
        BoolSet possible = eval_set(b, m, concat_cap).bools;
        if (!(polarity ? possible.t : possible.f)) return std::nullopt;
        CMemory out = m;
        ValueSet lv = eval_set(*b.a, m, concat_cap), rv = eval_set(*b.b, m, concat_cap);
        if (b.a->kind == K::Var) {
          ValueSet nv = lookup(m, b.a->str_val);
          nv.ints = concrete_detail::restrict_ints(nv.ints, b.op, true, polarity, rv.ints);
          nv.strs = concrete_detail::restrict_strs(nv.strs, b.op, true, polarity, rv.strs);
          out[b.a->str_val] = nv;
        }
        if (b.b->kind == K::Var) {
          ValueSet nv = lookup(out, b.b->str_val);
          nv.ints = concrete_detail::restrict_ints(nv.ints, b.op, false, polarity, lv.ints);
          nv.strs = concrete_detail::restrict_strs(nv.strs, b.op, false, polarity, lv.strs);
          out[b.b->str_val] = nv;
        }
        return out;
      }
      break;
    default:
      break;
  }
  // Any other shape: satisfiability only.
  BoolSet possible = eval_set(b, m, concat_cap).bools;
  if (!(polarity ? possible.t : possible.f)) return std::nullopt;
  return m;
}

// ---- executable values ----------------------------------------------------

struct CodeSplit {
  std::vector<std::pair<std::string, Program>> programs;
  std::vector<std::string> plain;  // non-executable strings
};

inline CodeSplit split_executable(const StrSet& strs) {
  CodeSplit out;
  for (const auto& s : strs) {
    if (auto p = parse_code_value(s))
      out.programs.emplace_back(s, std::move(*p));
    else
      out.plain.push_back(s);
  }
  return out;
}

// ---- trace runner -----------------------------------------------------------

struct TraceStep {
  uint32_t depth;
  uint32_t line;
  Env env;  // before the line executes
};

struct TraceResult {
  std::vector<TraceStep> steps;
  Env exit;
};

namespace concrete_detail {

struct TraceCtx {
  const RandFn& rand;
  TraceLimits limits;
  size_t steps = 0;
  std::vector<TraceStep>* log = nullptr;
};

inline Env run_trace_rec(const LabeledProgram& lp, Env env, TraceCtx& ctx, uint32_t depth) {
  if (depth > ctx.limits.max_tower) throw TowerDivergence();
  uint32_t pc = lp.entry;
  for (;;) {
    if (++ctx.steps > ctx.limits.max_steps) throw TraceBudget();
    if (ctx.log) ctx.log->push_back({depth, pc, env});
    const Line& L = lp.lines[pc];
    switch (L.kind) {
      case Line::Kind::End:
        return env;
      case Line::Kind::Skip:
        pc = L.next;
        break;
      case Line::Kind::Assign:
        env[L.var] = eval_value(*L.expr, env, ctx.rand);
        pc = L.next;
        break;
      case Line::Kind::If:
      case Line::Kind::While: {
        Value c = eval_value(*L.expr, env, ctx.rand);
        if (c.kind != Value::Kind::Bool) throw TraceError("condition is not boolean");
        pc = c.b ? L.tsucc : L.fsucc;
        break;
      }
      case Line::Kind::Reflect: {
        Value v = eval_value(*L.expr, env, ctx.rand);
        if (v.kind != Value::Kind::Str) throw TraceError("reflect argument is not a string");
        if (auto prog = parse_code_value(v.s))
          env = run_trace_rec(label(*prog), env, ctx, depth + 1);
        pc = L.next;
        break;
      }
      case Line::Kind::AssignReflect: {
        Value v = eval_value(*L.expr, env, ctx.rand);
        if (v.kind != Value::Kind::Str) throw TraceError("reflect argument is not a string");
        if (auto prog = parse_code_value(v.s)) {
          env[L.var] = Value::of(std::string());
          env = run_trace_rec(label(*prog), env, ctx, depth + 1);
        } else {
          env[L.var] = v;
        }
        pc = L.next;
        break;
      }
    }
  }
}

}  // namespace concrete_detail

inline TraceResult run_trace(const LabeledProgram& lp, Env env, const RandFn& rand,
                             TraceLimits limits = {}) {
  TraceResult out;
  concrete_detail::TraceCtx ctx{rand, limits, 0, &out.steps};
  out.exit = concrete_detail::run_trace_rec(lp, std::move(env), ctx, 0);
  return out;
}

// ---- trace-driven collecting ------------------------------------------------

using CStore = std::map<uint32_t, CMemory>;

// One collecting sub-computation fired by a reflect site.
struct ReflectRun {
  uint32_t depth;
  uint32_t site_line;
  std::string word;
  CStore store;
};

struct CollectResult {
  CStore store;
  Env exit_env;
  std::vector<ReflectRun> reflect_runs;
};

struct CollectLimits {
  size_t max_steps = 100000;
  uint32_t max_tower = 8;
  size_t concat_cap = 16384;
};

namespace concrete_detail {

struct CollectCtx {
  const RandFn& rand;
  CollectLimits limits;
  size_t steps = 0;
  std::vector<ReflectRun>* runs = nullptr;
};

inline void join_into(CStore& store, uint32_t line, const CMemory& m) {
  auto it = store.find(line);
  if (it == store.end())
    store.emplace(line, m);
  else
    it->second = join(it->second, m);
}

// Runs the program from `env`, applying set-valued transfers at each line the
// execution visits. Returns the exit environment; fills `store`.
inline Env collect_rec(const LabeledProgram& lp, Env env, const CMemory& init, CStore& store,
                       CollectCtx& ctx, uint32_t depth) {
  if (depth > ctx.limits.max_tower) throw TowerDivergence();
  join_into(store, lp.entry, init);
  uint32_t pc = lp.entry;
  auto rand_wrap = [&ctx]() { return ctx.rand(); };
  for (;;) {
    if (++ctx.steps > ctx.limits.max_steps) throw TraceBudget();
    const Line& L = lp.lines[pc];
    const CMemory M = store[pc];  // copy: transfers below mutate the store
    switch (L.kind) {
      case Line::Kind::End:
        return env;
      case Line::Kind::Skip:
        join_into(store, L.next, M);
        pc = L.next;
        break;
      case Line::Kind::Assign: {
        CMemory m2 = M;
        m2[L.var] = eval_set(*L.expr, M, ctx.limits.concat_cap);
        join_into(store, L.next, m2);
        env[L.var] = eval_value(*L.expr, env, rand_wrap);
        pc = L.next;
        break;
      }
      case Line::Kind::If:
      case Line::Kind::While: {
        Value c = eval_value(*L.expr, env, rand_wrap);
        if (c.kind != Value::Kind::Bool) throw TraceError("condition is not boolean");
        auto tm = filter_condition(*L.expr, M, true, ctx.limits.concat_cap);
        auto fm = filter_condition(*L.expr, M, false, ctx.limits.concat_cap);
        if (L.kind == Line::Kind::If) {
          if (tm) join_into(store, L.tsucc, *tm);
          if (fm) join_into(store, L.fsucc, *fm);
        } else {
          // Loop heads contribute the exit memory only when the trace leaves.
          if (c.b && tm) join_into(store, L.tsucc, *tm);
          if (!c.b && fm) join_into(store, L.fsucc, *fm);
        }
        pc = c.b ? L.tsucc : L.fsucc;
        break;
      }
      case Line::Kind::Reflect:
      case Line::Kind::AssignReflect: {
        bool assigns = L.kind == Line::Kind::AssignReflect;
        ValueSet vs = eval_set(*L.expr, M, ctx.limits.concat_cap);
        CodeSplit split = split_executable(vs.strs);

        // Fallthrough half: non-executable values leave the memory alone
        // (or become a plain assignment).
        if (!split.plain.empty()) {
          CMemory m2 = M;
          if (assigns) m2[L.var] = ValueSet::of_str(StrSet(split.plain.begin(), split.plain.end()));
          join_into(store, L.next, m2);
        }
        if (assigns && !split.programs.empty()) {
          CMemory seeded = M;
          seeded[L.var] = ValueSet::of_str({std::string()});
          join_into(store, L.next, seeded);
        }

        // One collecting sub-run per executable value, each driven by its
        // own execution from the current environment; exits join the
        // successor. The trace environment advances only through the value
        // the real execution holds.
        Value tv = eval_value(*L.expr, env, rand_wrap);
        if (tv.kind != Value::Kind::Str) throw TraceError("reflect argument is not a string");
        std::optional<Env> next_env;
        for (const auto& [word, prog] : split.programs) {
          LabeledProgram sub = label(prog);
          CStore sub_store;
          Env drive = env;
          if (assigns) drive[L.var] = Value::of(std::string());
          Env sub_exit = collect_rec(sub, drive, M, sub_store, ctx, depth + 1);
          join_into(store, L.next, sub_store[sub.end_line]);
          if (ctx.runs) ctx.runs->push_back({depth + 1, pc, word, std::move(sub_store)});
          if (word == tv.s) next_env = std::move(sub_exit);
        }
        if (next_env) {
          env = std::move(*next_env);
        } else if (assigns) {
          env[L.var] = tv;  // the traced value is plain data
        }
        pc = L.next;
        break;
      }
    }
  }
}

}  // namespace concrete_detail

inline CollectResult run_collecting(const LabeledProgram& lp, Env env, const CMemory& init,
                                    const RandFn& rand, CollectLimits limits = {}) {
  CollectResult out;
  concrete_detail::CollectCtx ctx{rand, limits, 0, &out.reflect_runs};
  out.exit_env = concrete_detail::collect_rec(lp, std::move(env), init, out.store, ctx, 0);
  return out;
}

}  // namespace sea
