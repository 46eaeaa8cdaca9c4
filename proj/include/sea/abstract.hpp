#pragma once
// Abstract interpreter: a worklist fixpoint over per-line abstract memories,
// widening at loop heads. Reflection sites synthesize a program covering the
// argument language and analyze it recursively; when synthesis degrades or
// the reflection tower reaches the configured threshold, the variables the
// code could touch are sent to top instead.

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sea/alphabet.hpp"
#include "sea/ast.hpp"
#include "sea/concrete.hpp"
#include "sea/domain.hpp"
#include "sea/exec.hpp"
#include "sea/fa.hpp"
#include "sea/sft.hpp"

namespace sea {

struct AnalysisConfig {
  unsigned widen_n = 3;           // automata widening depth
  unsigned tower_threshold = 4;   // reflection nesting depth that forces a cutoff
  unsigned loop_widen_delay = 1;  // growing joins tolerated at a loop head before widening
  std::vector<long long> interval_thresholds;  // extra widening landing points
  size_t enum_cap = 64;       // language size treated as an exact finite set
  size_t max_steps = 200000;  // transfer applications before giving up
};

struct AnalysisResult;

// What the analyzer decided at one reflection site; revisits during the
// fixpoint overwrite the record, so the final iteration wins.
struct SiteRecord {
  uint32_t line = 0;
  unsigned depth = 0;
  AbstVal input;  // abstract value of the argument
  bool ran_pipeline = false;
  SiteSynthesis synthesis;  // meaningful when ran_pipeline
  bool cutoff = false;      // tower threshold reached
  bool havoc = false;       // coarse fallback applied
  std::vector<std::string> havoc_vars;
  std::shared_ptr<const AnalysisResult> sub;  // analysis of the synthesized program
};

struct AnalysisResult {
  AbstStore store;  // per-line memory; a line is unreachable if absent
  AbstMemory exit;  // memory at the end line
  std::vector<SiteRecord> sites;
  std::vector<std::string> warnings;
};

inline AnalysisResult analyze(const LabeledProgram& lp, const AbstMemory& entry,
                              const AnalysisConfig& cfg = {}, unsigned depth = 0);

namespace abstract_detail {

constexpr long long kIntMin = std::numeric_limits<long long>::min();
constexpr long long kIntMax = std::numeric_limits<long long>::max();

// ---- sort projections -------------------------------------------------------

inline AbstVal int_part(const AbstVal& v) {
  if (v.is_top()) return AbstVal::interval({}, {});
  return v.sort == AbstVal::Sort::Int ? v : AbstVal::bot();
}

inline AbstVal bool_part(const AbstVal& v) {
  if (v.is_top()) return AbstVal::bools(true, true);
  return v.sort == AbstVal::Sort::Bool ? v : AbstVal::bot();
}

inline std::optional<Fa> str_part(const AbstVal& v) {
  if (v.is_top()) return fa_sigma_star();
  if (v.sort == AbstVal::Sort::Str) return v.fa;
  return std::nullopt;
}

// ---- interval arithmetic ----------------------------------------------------

// Out-of-range results widen to unbounded rather than wrapping.
inline std::optional<long long> narrowed(__int128 x) {
  if (x < static_cast<__int128>(kIntMin) || x > static_cast<__int128>(kIntMax))
    return std::nullopt;
  return static_cast<long long>(x);
}

inline AbstVal iv_add(const AbstVal& a, const AbstVal& b) {
  std::optional<long long> lo, hi;
  if (a.lo && b.lo) lo = narrowed(static_cast<__int128>(*a.lo) + *b.lo);
  if (a.hi && b.hi) hi = narrowed(static_cast<__int128>(*a.hi) + *b.hi);
  return AbstVal::interval(lo, hi);
}

inline AbstVal iv_sub(const AbstVal& a, const AbstVal& b) {
  std::optional<long long> lo, hi;
  if (a.lo && b.hi) lo = narrowed(static_cast<__int128>(*a.lo) - *b.hi);
  if (a.hi && b.lo) hi = narrowed(static_cast<__int128>(*a.hi) - *b.lo);
  return AbstVal::interval(lo, hi);
}

inline AbstVal iv_mul(const AbstVal& a, const AbstVal& b) {
  if (!a.lo || !a.hi || !b.lo || !b.hi) return AbstVal::interval({}, {});
  __int128 p[4] = {static_cast<__int128>(*a.lo) * *b.lo, static_cast<__int128>(*a.lo) * *b.hi,
                   static_cast<__int128>(*a.hi) * *b.lo, static_cast<__int128>(*a.hi) * *b.hi};
  return AbstVal::interval(narrowed(*std::min_element(p, p + 4)),
                           narrowed(*std::max_element(p, p + 4)));
}

// Possible comparison outcomes between two nonempty intervals.
inline AbstVal cmp_intervals(char op, const AbstVal& a, const AbstVal& b) {
  bool t, f;
  if (op == '=') {
    t = !glb(a, b).is_bot();
    bool a1 = a.lo && a.hi && *a.lo == *a.hi;
    bool b1 = b.lo && b.hi && *b.lo == *b.hi;
    f = !(a1 && b1 && *a.lo == *b.lo);
  } else {
    const AbstVal& lo_side = op == '<' ? a : b;
    const AbstVal& hi_side = op == '<' ? b : a;
    t = !lo_side.lo || !hi_side.hi || *lo_side.lo < *hi_side.hi;
    f = !lo_side.hi || !hi_side.lo || *lo_side.hi >= *hi_side.lo;
  }
  return AbstVal::bools(t, f);
}

// ---- string helpers ---------------------------------------------------------

inline std::optional<std::set<std::string>> enum_strs(const Fa& a, size_t cap) {
  auto ws = enumerate_language(a, cap);
  if (!ws) return std::nullopt;
  std::set<std::string> out;
  for (const auto& w : *ws) out.insert(syms_str(w));
  return out;
}

inline const Fa& sigma_plus() {
  static const Fa p = [] {
    Fa a;
    a.num_states = 2;
    a.accepting = {false, true};
    for (Sym s : sigma_alphabet()) {
      a.edges.push_back({0, s, 1});
      a.edges.push_back({1, s, 1});
    }
    return a;
  }();
  return p;
}

// Possible comparison outcomes between two string languages; exact on small
// finite sets, language tests otherwise. Order is strict prefix.
inline AbstVal cmp_langs(char op, const Fa& a, const Fa& b, size_t cap) {
  auto ea = enum_strs(a, cap), eb = enum_strs(b, cap);
  if (ea && eb) {
    bool t = false, f = false;
    for (const auto& x : *ea) {
      for (const auto& y : *eb) {
        bool v = op == '=' ? x == y
                 : op == '<' ? concrete_detail::strict_prefix(x, y)
                             : concrete_detail::strict_prefix(y, x);
        (v ? t : f) = true;
        if (t && f) return AbstVal::bools(true, true);
      }
    }
    return AbstVal::bools(t, f);
  }
  // At least one side holds more words than the cap, so some pair differs.
  bool t;
  if (op == '=') {
    t = !is_empty_language(fa_intersect(a, b));
  } else {
    const Fa& pre = op == '<' ? a : b;
    const Fa& ext = op == '<' ? b : a;
    t = !is_empty_language(fa_intersect(ext, fa_concat(pre, sigma_plus())));
  }
  return AbstVal::bools(t, true);
}

}  // namespace abstract_detail

// ---- expressions ------------------------------------------------------------

// Abstract value of an expression; bottom mirrors the set semantics dropping
// every evaluation that would fault.
inline AbstVal abs_eval(const Expr& e, const AbstMemory& m, const AnalysisConfig& cfg) {
  namespace ad = abstract_detail;
  using K = Expr::Kind;
  switch (e.kind) {
    case K::IntLit:
      return AbstVal::of_int(e.int_val);
    case K::BoolLit:
      return AbstVal::of_bool(e.bool_val);
    case K::StrLit:
      return AbstVal::of_str(e.str_val);
    case K::Var:
      return lookup(m, e.str_val);
    case K::Rand:
      return AbstVal::interval({}, {});
    case K::Len: {
      AbstVal a = abs_eval(*e.a, m, cfg);
      if (a.is_top()) return AbstVal::interval(0, {});
      if (a.sort != AbstVal::Sort::Str) return AbstVal::bot();
      auto [lo, hi] = length_range(a.fa);
      return AbstVal::interval(static_cast<long long>(lo),
                               hi ? std::optional<long long>(static_cast<long long>(*hi))
                                  : std::nullopt);
    }
    case K::Num: {
      AbstVal a = abs_eval(*e.a, m, cfg);
      if (a.is_top()) return AbstVal::interval({}, {});
      if (a.sort != AbstVal::Sort::Str) return AbstVal::bot();
      auto ws = ad::enum_strs(a.fa, cfg.enum_cap);
      if (!ws) return AbstVal::interval({}, {});
      AbstVal out = AbstVal::bot();
      for (const auto& s : *ws)
        if (auto n = concrete_detail::parse_numeral(s)) out = lub(out, AbstVal::of_int(*n));
      return out;
    }
    case K::Substr: {
      AbstVal s = abs_eval(*e.a, m, cfg);
      auto base = ad::str_part(s);
      AbstVal n = glb(ad::int_part(abs_eval(*e.b, m, cfg)), AbstVal::interval(1, {}));
      AbstVal w = glb(ad::int_part(abs_eval(*e.c, m, cfg)), AbstVal::interval(0, {}));
      if (!base || n.is_bot() || w.is_bot()) return AbstVal::bot();
      if (n.hi && w.hi) {
        __int128 pairs = static_cast<__int128>(*n.hi - *n.lo + 1) * (*w.hi - *w.lo + 1);
        if (pairs <= static_cast<__int128>(cfg.enum_cap)) {
          Fa acc = Fa::empty_language();
          for (long long i = *n.lo; i <= *n.hi; ++i)
            for (long long j = *w.lo; j <= *w.hi; ++j)
              acc = fa_union(acc, transduce_fa(substring_sft(i, j, sigma_alphabet()), *base));
          return AbstVal::strings(acc);
        }
      }
      return AbstVal::strings(factors(*base));
    }
    case K::Not: {
      AbstVal b = ad::bool_part(abs_eval(*e.a, m, cfg));
      if (b.is_bot()) return b;
      return AbstVal::bools(b.bf, b.bt);
    }
    case K::Binop: {
      AbstVal l = abs_eval(*e.a, m, cfg), r = abs_eval(*e.b, m, cfg);
      switch (e.op) {
        case '+':
        case '-':
        case '*': {
          AbstVal li = ad::int_part(l), ri = ad::int_part(r);
          if (li.is_bot() || ri.is_bot()) return AbstVal::bot();
          if (e.op == '+') return ad::iv_add(li, ri);
          if (e.op == '-') return ad::iv_sub(li, ri);
          return ad::iv_mul(li, ri);
        }
        case '.': {
          auto lf = ad::str_part(l), rf = ad::str_part(r);
          if (!lf || !rf) return AbstVal::bot();
          return AbstVal::strings(fa_concat(*lf, *rf));
        }
        case '&': {
          AbstVal lb = ad::bool_part(l), rb = ad::bool_part(r);
          if (lb.is_bot() || rb.is_bot()) return AbstVal::bot();
          return AbstVal::bools(lb.bt && rb.bt, lb.bf || rb.bf);
        }
        case '=':
        case '<':
        case '>': {
          AbstVal out = AbstVal::bot();
          AbstVal li = ad::int_part(l), ri = ad::int_part(r);
          if (!li.is_bot() && !ri.is_bot()) out = lub(out, ad::cmp_intervals(e.op, li, ri));
          auto lf = ad::str_part(l), rf = ad::str_part(r);
          if (lf && rf) out = lub(out, ad::cmp_langs(e.op, *lf, *rf, cfg.enum_cap));
          return out;
        }
      }
      return AbstVal::bot();
    }
  }
  return AbstVal::bot();
}

// ---- condition filters --------------------------------------------------------

namespace abstract_detail {

inline bool bool_possible(const AbstVal& v, bool polarity) {
  if (v.is_top()) return true;
  return v.sort == AbstVal::Sort::Bool && (polarity ? v.bt : v.bf);
}

// Keep only the ints of x that have a comparison witness in `other`. Mirrors
// the concrete filter on interval hulls; non-integer bindings are left alone.
inline void clamp_int_var(AbstMemory& out, const std::string& x, char op, bool left,
                          bool outcome, const AbstVal& other) {
  AbstVal cur = lookup(out, x);
  if (cur.sort != AbstVal::Sort::Int) return;
  AbstVal b = int_part(other);
  if (b.is_bot()) {
    out[x] = AbstVal::bot();
    return;
  }
  char rel = op;
  if (!left && op != '=') rel = op == '<' ? '>' : '<';
  if (!outcome) {
    if (rel == '=') {
      // An interval can only lose an endpoint.
      if (b.lo && b.hi && *b.lo == *b.hi) {
        long long v = *b.lo;
        if (cur.lo && cur.hi && *cur.lo == v && *cur.hi == v)
          out[x] = AbstVal::bot();
        else if (cur.lo && *cur.lo == v)
          out[x] = AbstVal::interval(*cur.lo + 1, cur.hi);
        else if (cur.hi && *cur.hi == v)
          out[x] = AbstVal::interval(cur.lo, *cur.hi - 1);
      }
      return;
    }
    rel = rel == '<' ? 'g' : 'l';  // g: x >= some y; l: x <= some y
  }
  switch (rel) {
    case '=':
      out[x] = glb(cur, b);
      return;
    case '<':  // x < some y: x <= max(B) - 1
      if (!b.hi) return;
      out[x] = *b.hi == kIntMin ? AbstVal::bot() : glb(cur, AbstVal::interval({}, *b.hi - 1));
      return;
    case '>':
      if (!b.lo) return;
      out[x] = *b.lo == kIntMax ? AbstVal::bot() : glb(cur, AbstVal::interval(*b.lo + 1, {}));
      return;
    case 'g':
      if (b.lo) out[x] = glb(cur, AbstVal::interval(*b.lo, {}));
      return;
    case 'l':
      if (b.hi) out[x] = glb(cur, AbstVal::interval({}, *b.hi));
      return;
  }
}

}  // namespace abstract_detail

// Restricts m to the given polarity of the condition; only bare-variable
// shapes are narrowed, everything else is a satisfiability check. Returns
// nullopt when the polarity cannot hold.
inline std::optional<AbstMemory> abs_filter(const Expr& b, const AbstMemory& m, bool polarity,
                                            const AnalysisConfig& cfg) {
  namespace ad = abstract_detail;
  using K = Expr::Kind;
  switch (b.kind) {
    case K::BoolLit:
      if (b.bool_val == polarity) return m;
      return std::nullopt;
    case K::Not:
      return abs_filter(*b.a, m, !polarity, cfg);
    case K::Var: {
      AbstVal v = lookup(m, b.str_val);
      if (!ad::bool_possible(v, polarity)) return std::nullopt;
      AbstMemory out = m;
      out[b.str_val] = glb(v, AbstVal::of_bool(polarity));
      return out;
    }
    case K::Binop:
      if (b.op == '&') {
        if (polarity) {
          auto m1 = abs_filter(*b.a, m, true, cfg);
          if (!m1) return std::nullopt;
          return abs_filter(*b.b, *m1, true, cfg);
        }
        auto m1 = abs_filter(*b.a, m, false, cfg);
        auto m2 = abs_filter(*b.b, m, false, cfg);
        if (!m1) return m2;
        if (!m2) return m1;
        return memory_lub(*m1, *m2);
      }
      if (b.op == '=' || b.op == '<' || b.op == '>') {
        if (!ad::bool_possible(abs_eval(b, m, cfg), polarity)) return std::nullopt;
        AbstMemory out = m;
        AbstVal lv = abs_eval(*b.a, m, cfg), rv = abs_eval(*b.b, m, cfg);
        if (b.a->kind == K::Var) ad::clamp_int_var(out, b.a->str_val, b.op, true, polarity, rv);
        if (b.b->kind == K::Var) ad::clamp_int_var(out, b.b->str_val, b.op, false, polarity, lv);
        return out;
      }
      break;
    default:
      break;
  }
  if (!ad::bool_possible(abs_eval(b, m, cfg), polarity)) return std::nullopt;
  return m;
}

// ---- variable universe --------------------------------------------------------

namespace abstract_detail {

inline void expr_vars(const Expr& e, std::set<std::string>& out) {
  if (e.kind == Expr::Kind::Var) out.insert(e.str_val);
  if (e.a) expr_vars(*e.a, out);
  if (e.b) expr_vars(*e.b, out);
  if (e.c) expr_vars(*e.c, out);
}

inline std::set<std::string> program_vars(const LabeledProgram& lp) {
  std::set<std::string> out;
  for (const Line& l : lp.lines) {
    if (!l.var.empty()) out.insert(l.var);
    if (l.expr) expr_vars(*l.expr, out);
  }
  return out;
}

// Identifiers that precede ":=" inside some value: the only names the
// reflected code could bind. Returns false when the language is too rich to
// enumerate; callers then fall back to the names already known.
inline bool harvest_assignable(const Fa& a, std::set<std::string>& universe) {
  static const Fa probe = [] {
    Fa p;
    p.num_states = 4;
    p.accepting = {false, false, false, true};
    auto arc = [&p](uint32_t s, char c, uint32_t d) {
      p.edges.push_back({s, static_cast<Sym>(static_cast<unsigned char>(c)), d});
    };
    for (char c = 'a'; c <= 'z'; ++c) {
      arc(0, c, 1);
      arc(1, c, 1);
    }
    for (char c = 'A'; c <= 'Z'; ++c) {
      arc(0, c, 1);
      arc(1, c, 1);
    }
    arc(0, '_', 1);
    arc(1, '_', 1);
    for (char c = '0'; c <= '9'; ++c) arc(1, c, 1);
    arc(1, ':', 2);
    arc(2, '=', 3);
    return p;
  }();
  auto hits = enum_strs(fa_intersect(factors(a), probe), 256);
  if (!hits) return false;
  for (const auto& s : *hits) universe.insert(s.substr(0, s.size() - 2));
  return true;
}

// ---- fixpoint engine ----------------------------------------------------------

struct Engine {
  const LabeledProgram& lp;
  const AnalysisConfig& cfg;
  unsigned depth;
  AbstStore store;
  std::map<uint32_t, unsigned> grow;
  std::set<uint32_t> work;
  std::map<uint32_t, SiteRecord> sites;
  std::vector<std::string> warnings;
  std::set<std::string> warned;
  size_t steps = 0;

  Engine(const LabeledProgram& p, const AnalysisConfig& c, unsigned d)
      : lp(p), cfg(c), depth(d) {}

  void warn(std::string msg) {
    if (warned.insert(msg).second) warnings.push_back(std::move(msg));
  }

  void propagate(uint32_t to, const AbstMemory& m) {
    auto it = store.find(to);
    if (it == store.end()) {
      store.emplace(to, m);
      work.insert(to);
      return;
    }
    AbstMemory joined = memory_lub(it->second, m);
    if (memory_leq(joined, it->second)) return;
    if (lp.lines[to].kind == Line::Kind::While && ++grow[to] > cfg.loop_widen_delay)
      joined = memory_widen(it->second, joined, cfg.widen_n, cfg.interval_thresholds);
    it->second = std::move(joined);
    work.insert(to);
  }

  void reflect(uint32_t pc, const Line& l, const AbstMemory& m) {
    bool assigns = l.kind == Line::Kind::AssignReflect;
    AbstVal v = abs_eval(*l.expr, m, cfg);
    SiteRecord rec;
    rec.line = pc;
    rec.depth = depth;
    rec.input = v;
    if (v.sort != AbstVal::Sort::Str && !v.is_top()) {
      // No string can reach the site; nothing executes and nothing falls
      // through, matching the set semantics dropping faulting values.
      sites[pc] = std::move(rec);
      return;
    }
    Fa code = v.is_top() ? fa_sigma_star() : v.fa;

    // With a small finite language the split into data and code is exact;
    // otherwise assume both halves are inhabited.
    bool has_plain = true, has_programs = true;
    if (auto ws = enum_strs(code, cfg.enum_cap)) {
      has_plain = false;
      has_programs = false;
      for (const auto& s : *ws) (is_executable(s) ? has_programs : has_plain) = true;
    }

    bool cut = has_programs && depth + 1 >= cfg.tower_threshold;
    if (!cut) {
      rec.ran_pipeline = true;
      rec.synthesis = exe_pipeline(code);
      if (!rec.synthesis.degraded())
        has_programs = !is_empty_language(rec.synthesis.executable.fa);
    }

    if (cut || (rec.ran_pipeline && rec.synthesis.degraded() && has_programs)) {
      havoc_site(pc, l, m, code, assigns, cut, std::move(rec));
      return;
    }

    if (has_plain) {
      AbstMemory m2 = m;
      if (assigns) m2[l.var] = AbstVal::strings(code);
      propagate(l.next, m2);
    }
    if (has_programs) {
      if (assigns) {
        AbstMemory seeded = m;
        seeded[l.var] = AbstVal::of_str("");
        propagate(l.next, seeded);
      }
      if (rec.synthesis.synthesis.program) {
        LabeledProgram sub = label(*rec.synthesis.synthesis.program);
        AnalysisResult sr = analyze(sub, m, cfg, depth + 1);
        for (const auto& w : sr.warnings) warn("via line " + std::to_string(pc) + ": " + w);
        rec.sub = std::make_shared<AnalysisResult>(std::move(sr));
        propagate(l.next, rec.sub->exit);
      }
    }
    sites[pc] = std::move(rec);
  }

  // Coarse fallback: any variable the code could bind goes to top. The
  // successor join covers the fallthrough, seed, and execution halves at
  // once since the havocked memory is above all of them.
  void havoc_site(uint32_t pc, const Line& l, const AbstMemory& m, const Fa& code, bool assigns,
                  bool cut, SiteRecord rec) {
    rec.cutoff = cut;
    rec.havoc = true;
    if (cut)
      warn("line " + std::to_string(pc) + ": reflection tower cut off at depth " +
           std::to_string(depth + 1) + "; affected variables set to top");
    else
      warn("line " + std::to_string(pc) + ": code synthesis degraded; affected variables set to top");
    std::set<std::string> universe = program_vars(lp);
    for (const auto& kv : m) universe.insert(kv.first);
    if (assigns) universe.insert(l.var);
    if (!harvest_assignable(code, universe))
      warn("line " + std::to_string(pc) + ": reflected code may bind variables beyond the reported ones");
    Fa subs = factors(code);
    AbstMemory hm = m;
    for (const auto& name : universe) {
      if ((assigns && name == l.var) || accepts_str(subs, name)) {
        hm[name] = AbstVal::top();
        rec.havoc_vars.push_back(name);
      }
    }
    sites[pc] = std::move(rec);
    propagate(l.next, hm);
  }

  AnalysisResult run(const AbstMemory& entry) {
    propagate(lp.entry, entry);
    while (!work.empty()) {
      if (++steps > cfg.max_steps) throw EvalLimit("abstract fixpoint budget exceeded");
      uint32_t pc = *work.begin();
      work.erase(work.begin());
      const Line& l = lp.lines[pc];
      const AbstMemory m = store[pc];  // copy: transfers below mutate the store
      switch (l.kind) {
        case Line::Kind::End:
          break;
        case Line::Kind::Skip:
          propagate(l.next, m);
          break;
        case Line::Kind::Assign: {
          AbstMemory m2 = m;
          m2[l.var] = abs_eval(*l.expr, m, cfg);
          propagate(l.next, m2);
          break;
        }
        case Line::Kind::If:
        case Line::Kind::While: {
          if (auto tm = abs_filter(*l.expr, m, true, cfg)) propagate(l.tsucc, *tm);
          if (auto fm = abs_filter(*l.expr, m, false, cfg)) propagate(l.fsucc, *fm);
          break;
        }
        case Line::Kind::Reflect:
        case Line::Kind::AssignReflect:
          reflect(pc, l, m);
          break;
      }
    }
    AnalysisResult res;
    res.store = std::move(store);
    if (auto it = res.store.find(lp.end_line); it != res.store.end()) res.exit = it->second;
    for (auto& [line, rec] : sites) res.sites.push_back(std::move(rec));
    res.warnings = std::move(warnings);
    return res;
  }
};

}  // namespace abstract_detail

inline AnalysisResult analyze(const LabeledProgram& lp, const AbstMemory& entry,
                              const AnalysisConfig& cfg, unsigned depth) {
  abstract_detail::Engine eng(lp, cfg, depth);
  return eng.run(entry);
}

}  // namespace sea
