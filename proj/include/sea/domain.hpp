#pragma once
// Abstract values: one lattice joining integer intervals, Boolean sets, and
// regular string languages under a shared top and bottom. Values of
// different sorts only meet at the extremes.

#include <optional>
#include <string>
#include <vector>

#include "sea/alphabet.hpp"
#include "sea/concrete.hpp"
#include "sea/fa.hpp"
#include "sea/values.hpp"

namespace sea {

struct AbstVal {
  enum class Sort { Bot, Int, Bool, Str, Top };
  Sort sort = Sort::Bot;

  // Int payload: [lo, hi], nullopt side = unbounded.
  std::optional<long long> lo, hi;
  // Bool payload.
  bool bt = false, bf = false;
  // Str payload, kept canonical so equality is language equality.
  Fa fa;

  static AbstVal top() { return AbstVal{Sort::Top, {}, {}, false, false, {}}; }
  static AbstVal bot() { return AbstVal{Sort::Bot, {}, {}, false, false, {}}; }
  static AbstVal interval(std::optional<long long> lo, std::optional<long long> hi) {
    if (lo && hi && *lo > *hi) return bot();
    AbstVal v;
    v.sort = Sort::Int;
    v.lo = lo;
    v.hi = hi;
    return v;
  }
  static AbstVal of_int(long long x) { return interval(x, x); }
  static AbstVal bools(bool t, bool f) {
    if (!t && !f) return bot();
    AbstVal v;
    v.sort = Sort::Bool;
    v.bt = t;
    v.bf = f;
    return v;
  }
  static AbstVal of_bool(bool b) { return bools(b, !b); }
  static AbstVal strings(const Fa& a) {
    Fa c = canonical(a);
    if (is_empty_language(c)) return bot();
    AbstVal v;
    v.sort = Sort::Str;
    v.fa = std::move(c);
    return v;
  }
  static AbstVal of_str(const std::string& s) { return strings(fa_word_str(s)); }

  bool is_bot() const { return sort == Sort::Bot; }
  bool is_top() const { return sort == Sort::Top; }

  bool operator==(const AbstVal& o) const {
    if (sort != o.sort) return false;
    switch (sort) {
      case Sort::Bot:
      case Sort::Top:
        return true;
      case Sort::Int:
        return lo == o.lo && hi == o.hi;
      case Sort::Bool:
        return bt == o.bt && bf == o.bf;
      case Sort::Str:
        return fa == o.fa;  // canonical automata compare structurally
    }
    return false;
  }
};

inline bool leq(const AbstVal& a, const AbstVal& b) {
  if (a.is_bot() || b.is_top()) return true;
  if (b.is_bot() || a.is_top()) return false;
  if (a.sort != b.sort) return false;
  switch (a.sort) {
    case AbstVal::Sort::Int: {
      bool lo_ok = !b.lo || (a.lo && *a.lo >= *b.lo);
      bool hi_ok = !b.hi || (a.hi && *a.hi <= *b.hi);
      return lo_ok && hi_ok;
    }
    case AbstVal::Sort::Bool:
      return (!a.bt || b.bt) && (!a.bf || b.bf);
    case AbstVal::Sort::Str:
      return includes_lang(a.fa, b.fa);
    default:
      return false;
  }
}

inline AbstVal lub(const AbstVal& a, const AbstVal& b) {
  if (a.is_bot()) return b;
  if (b.is_bot()) return a;
  if (a.is_top() || b.is_top() || a.sort != b.sort) return AbstVal::top();
  switch (a.sort) {
    case AbstVal::Sort::Int: {
      std::optional<long long> lo =
          (a.lo && b.lo) ? std::optional(std::min(*a.lo, *b.lo)) : std::nullopt;
      std::optional<long long> hi =
          (a.hi && b.hi) ? std::optional(std::max(*a.hi, *b.hi)) : std::nullopt;
      return AbstVal::interval(lo, hi);
    }
    case AbstVal::Sort::Bool:
      return AbstVal::bools(a.bt || b.bt, a.bf || b.bf);
    default:
      return AbstVal::strings(fa_union(a.fa, b.fa));
  }
}

inline AbstVal glb(const AbstVal& a, const AbstVal& b) {
  if (a.is_top()) return b;
  if (b.is_top()) return a;
  if (a.is_bot() || b.is_bot() || a.sort != b.sort) return AbstVal::bot();
  switch (a.sort) {
    case AbstVal::Sort::Int: {
      std::optional<long long> lo = a.lo;
      if (b.lo && (!lo || *b.lo > *lo)) lo = b.lo;
      std::optional<long long> hi = a.hi;
      if (b.hi && (!hi || *b.hi < *hi)) hi = b.hi;
      return AbstVal::interval(lo, hi);
    }
    case AbstVal::Sort::Bool:
      return AbstVal::bools(a.bt && b.bt, a.bf && b.bf);
    default:
      return AbstVal::strings(fa_intersect(a.fa, b.fa));
  }
}

// Widening: interval bounds that grew jump to the next threshold or to
// infinity; string languages widen through the bounded-equivalence quotient;
// Boolean sets are finite and just join. Cross-sort growth goes to top.
inline AbstVal widen_val(const AbstVal& a, const AbstVal& b, unsigned fa_depth,
                         const std::vector<long long>& thresholds = {}) {
  if (a.is_bot()) return b;
  if (b.is_bot()) return a;
  if (a.is_top() || b.is_top() || a.sort != b.sort) return AbstVal::top();
  switch (a.sort) {
    case AbstVal::Sort::Int: {
      std::optional<long long> lo = a.lo;
      if (!b.lo) {
        lo = std::nullopt;
      } else if (a.lo && *b.lo < *a.lo) {
        lo = std::nullopt;
        for (auto it = thresholds.rbegin(); it != thresholds.rend(); ++it)
          if (*it <= *b.lo) {
            lo = *it;
            break;
          }
      }
      std::optional<long long> hi = a.hi;
      if (!b.hi) {
        hi = std::nullopt;
      } else if (a.hi && *b.hi > *a.hi) {
        hi = std::nullopt;
        for (long long t : thresholds)
          if (t >= *b.hi) {
            hi = t;
            break;
          }
      }
      return AbstVal::interval(lo, hi);
    }
    case AbstVal::Sort::Bool:
      return AbstVal::bools(a.bt || b.bt, a.bf || b.bf);
    default:
      return AbstVal::strings(widen(a.fa, b.fa, fa_depth));
  }
}

// ---- concretization membership ------------------------------------------

inline bool gamma_contains(const AbstVal& v, const Value& c) {
  switch (v.sort) {
    case AbstVal::Sort::Top:
      return true;
    case AbstVal::Sort::Bot:
      return false;
    case AbstVal::Sort::Int:
      return c.kind == Value::Kind::Int && (!v.lo || c.i >= *v.lo) && (!v.hi || c.i <= *v.hi);
    case AbstVal::Sort::Bool:
      return c.kind == Value::Kind::Bool && (c.b ? v.bt : v.bf);
    case AbstVal::Sort::Str:
      return c.kind == Value::Kind::Str && accepts_str(v.fa, c.s);
  }
  return false;
}

// Does the concretization cover a whole collecting value set?
inline bool gamma_covers(const AbstVal& v, const ValueSet& s) {
  if (v.is_top()) return true;
  switch (v.sort) {
    case AbstVal::Sort::Bot:
      return s.ints.empty() && s.strs.empty() && s.bools.empty();
    case AbstVal::Sort::Int: {
      if (!s.strs.empty() || !s.bools.empty()) return false;
      if (s.ints.empty()) return true;
      if (s.ints.unbounded_below() && v.lo) return false;
      if (s.ints.unbounded_above() && v.hi) return false;
      auto mn = s.ints.min(), mx = s.ints.max();
      if (v.lo && mn && *mn < *v.lo) return false;
      if (v.lo && !mn) return false;
      if (v.hi && mx && *mx > *v.hi) return false;
      if (v.hi && !mx) return false;
      return true;
    }
    case AbstVal::Sort::Bool:
      if (!s.strs.empty() || !s.ints.empty()) return false;
      return (!s.bools.t || v.bt) && (!s.bools.f || v.bf);
    case AbstVal::Sort::Str: {
      if (!s.ints.empty() || !s.bools.empty()) return false;
      for (const auto& w : s.strs)
        if (!accepts_str(v.fa, w)) return false;
      return true;
    }
    default:
      return false;
  }
}

// Smallest abstract value covering a collecting value set; mixed-sort sets
// collapse to top.
inline AbstVal abst_of_values(const ValueSet& s) {
  AbstVal out = AbstVal::bot();
  if (!s.ints.empty())
    out = lub(out, AbstVal::interval(s.ints.unbounded_below() ? std::nullopt : s.ints.min(),
                                     s.ints.unbounded_above() ? std::nullopt : s.ints.max()));
  if (s.bools.t || s.bools.f) out = lub(out, AbstVal::bools(s.bools.t, s.bools.f));
  if (!s.strs.empty()) out = lub(out, AbstVal::strings(fa_words_str(s.strs)));
  return out;
}

// ---- abstract memories and stores ----------------------------------------

using AbstMemory = std::map<std::string, AbstVal>;
using AbstStore = std::map<uint32_t, AbstMemory>;

inline AbstVal lookup(const AbstMemory& m, const std::string& x) {
  auto it = m.find(x);
  return it == m.end() ? AbstVal::bot() : it->second;
}

inline bool memory_leq(const AbstMemory& a, const AbstMemory& b) {
  for (const auto& [x, v] : a)
    if (!leq(v, lookup(b, x))) return false;
  return true;
}

inline AbstMemory memory_lub(const AbstMemory& a, const AbstMemory& b) {
  AbstMemory out = a;
  for (const auto& [x, v] : b) {
    auto it = out.find(x);
    if (it == out.end())
      out.emplace(x, v);
    else
      it->second = lub(it->second, v);
  }
  return out;
}

inline AbstMemory memory_widen(const AbstMemory& a, const AbstMemory& b, unsigned fa_depth,
                               const std::vector<long long>& thresholds = {}) {
  AbstMemory out = a;
  for (const auto& [x, v] : b) {
    auto it = out.find(x);
    if (it == out.end()) {
      out.emplace(x, v);
    } else if (!leq(v, it->second)) {
      // Only strictly growing bindings are widened; stable ones keep their
      // exact value (equal-argument widening may lose precision otherwise).
      it->second = widen_val(it->second, v, fa_depth, thresholds);
    }
  }
  return out;
}

inline std::string abst_str(const AbstVal& v) {
  switch (v.sort) {
    case AbstVal::Sort::Top:
      return "top";
    case AbstVal::Sort::Bot:
      return "bot";
    case AbstVal::Sort::Int: {
      auto side = [](const std::optional<long long>& x, const char* inf) {
        return x ? std::to_string(*x) : std::string(inf);
      };
      return "[" + side(v.lo, "-inf") + "," + side(v.hi, "+inf") + "]";
    }
    case AbstVal::Sort::Bool:
      return v.bt && v.bf ? "{true,false}" : (v.bt ? "{true}" : "{false}");
    case AbstVal::Sort::Str: {
      auto words = enumerate_language(v.fa, 8);
      if (!words) return "lang<" + std::to_string(v.fa.num_states) + " states>";
      std::string s = "{";
      bool first = true;
      for (const auto& w : *words) {
        if (!first) s += ",";
        first = false;
        s += "'" + syms_str(w) + "'";
      }
      return s + "}";
    }
  }
  return "?";
}

}  // namespace sea
