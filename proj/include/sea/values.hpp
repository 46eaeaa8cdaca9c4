#pragma once
// Exact value sets for the collecting semantics. Integer sets are unions of
// disjoint integer spans (with open ends) so rand() and comparison filters
// stay representable without approximation.

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace sea {

// Raised when the oracle cannot produce an exact result (overflow, or a
// product over an unenumerable set).
struct EvalLimit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace values_detail {

inline long long checked_add(long long a, long long b) {
  long long r;
  if (__builtin_add_overflow(a, b, &r)) throw EvalLimit("integer overflow");
  return r;
}
inline long long checked_sub(long long a, long long b) {
  long long r;
  if (__builtin_sub_overflow(a, b, &r)) throw EvalLimit("integer overflow");
  return r;
}
inline long long checked_mul(long long a, long long b) {
  long long r;
  if (__builtin_mul_overflow(a, b, &r)) throw EvalLimit("integer overflow");
  return r;
}

}  // namespace values_detail

// Closed integer span; a missing bound extends to infinity on that side.
struct Span {
  std::optional<long long> lo, hi;
  friend bool operator==(const Span&, const Span&) = default;
};

class IntSet {
 public:
  IntSet() = default;

  static IntSet all() { return IntSet({Span{std::nullopt, std::nullopt}}); }
  static IntSet point(long long v) { return IntSet({Span{v, v}}); }
  static IntSet of(std::initializer_list<long long> vs) {
    IntSet s;
    for (long long v : vs) s.spans_.push_back({v, v});
    s.normalize();
    return s;
  }
  static IntSet range(std::optional<long long> lo, std::optional<long long> hi) {
    if (lo && hi && *lo > *hi) return {};
    return IntSet({Span{lo, hi}});
  }

  bool empty() const { return spans_.empty(); }
  bool is_all() const { return spans_.size() == 1 && !spans_[0].lo && !spans_[0].hi; }
  bool finite() const {
    for (const auto& s : spans_)
      if (!s.lo || !s.hi) return false;
    return true;
  }
  const std::vector<Span>& spans() const { return spans_; }

  bool contains(long long v) const {
    for (const auto& s : spans_)
      if ((!s.lo || *s.lo <= v) && (!s.hi || v <= *s.hi)) return true;
    return false;
  }

  std::optional<long long> min() const {
    if (spans_.empty() || !spans_.front().lo) return std::nullopt;
    return spans_.front().lo;
  }
  std::optional<long long> max() const {
    if (spans_.empty() || !spans_.back().hi) return std::nullopt;
    return spans_.back().hi;
  }
  bool unbounded_below() const { return !spans_.empty() && !spans_.front().lo; }
  bool unbounded_above() const { return !spans_.empty() && !spans_.back().hi; }

  // All members when the set is finite and no larger than cap.
  std::optional<std::vector<long long>> enumerate(size_t cap = 4096) const {
    if (!finite()) return std::nullopt;
    std::vector<long long> out;
    for (const auto& s : spans_) {
      for (long long v = *s.lo;; ++v) {
        if (out.size() >= cap) return std::nullopt;
        out.push_back(v);
        if (v == *s.hi) break;
      }
    }
    return out;
  }

  IntSet unioned(const IntSet& o) const {
    IntSet r;
    r.spans_ = spans_;
    r.spans_.insert(r.spans_.end(), o.spans_.begin(), o.spans_.end());
    r.normalize();
    return r;
  }

  IntSet intersect(const IntSet& o) const {
    IntSet r;
    for (const auto& a : spans_)
      for (const auto& b : o.spans_) {
        std::optional<long long> lo = a.lo, hi = a.hi;
        if (b.lo && (!lo || *b.lo > *lo)) lo = b.lo;
        if (b.hi && (!hi || *b.hi < *hi)) hi = b.hi;
        if (lo && hi && *lo > *hi) continue;
        r.spans_.push_back({lo, hi});
      }
    r.normalize();
    return r;
  }

  // {a + b}: span sums stay contiguous, so this is exact.
  IntSet add(const IntSet& o) const {
    using values_detail::checked_add;
    IntSet r;
    for (const auto& a : spans_)
      for (const auto& b : o.spans_) {
        std::optional<long long> lo, hi;
        if (a.lo && b.lo) lo = checked_add(*a.lo, *b.lo);
        if (a.hi && b.hi) hi = checked_add(*a.hi, *b.hi);
        r.spans_.push_back({lo, hi});
      }
    r.normalize();
    return r;
  }

  IntSet negate() const {
    using values_detail::checked_sub;
    IntSet r;
    for (const auto& a : spans_) {
      std::optional<long long> lo, hi;
      if (a.hi) lo = checked_sub(0, *a.hi);
      if (a.lo) hi = checked_sub(0, *a.lo);
      r.spans_.push_back({lo, hi});
    }
    r.normalize();
    return r;
  }

  IntSet sub(const IntSet& o) const { return add(o.negate()); }

  // {a * b} has gaps, so it is computed by enumeration only.
  IntSet mul(const IntSet& o, size_t cap = 4096) const {
    auto as = enumerate(cap), bs = o.enumerate(cap);
    if (!as || !bs) throw EvalLimit("product over an unenumerable integer set");
    if (as->size() * bs->size() > cap) throw EvalLimit("product too large to enumerate");
    IntSet r;
    for (long long a : *as)
      for (long long b : *bs) r.spans_.push_back({values_detail::checked_mul(a, b),
                                                  values_detail::checked_mul(a, b)});
    r.normalize();
    return r;
  }

  bool subset_of(const IntSet& o) const { return intersect(o) == *this; }

  friend bool operator==(const IntSet&, const IntSet&) = default;

 private:
  explicit IntSet(std::vector<Span> s) : spans_(std::move(s)) { normalize(); }

  // Sort by lower bound and merge overlapping or adjacent spans.
  void normalize() {
    auto key = [](const Span& s) {
      return std::pair<bool, long long>(s.lo.has_value(), s.lo.value_or(0));
    };
    std::sort(spans_.begin(), spans_.end(),
              [&](const Span& a, const Span& b) { return key(a) < key(b); });
    std::vector<Span> out;
    for (const auto& s : spans_) {
      if (!out.empty()) {
        Span& p = out.back();
        bool joinable = !p.hi || !s.lo || *s.lo <= *p.hi ||
                        (*p.hi < std::numeric_limits<long long>::max() && *s.lo == *p.hi + 1);
        if (joinable) {
          if (!p.hi || !s.hi)
            p.hi = std::nullopt;
          else
            p.hi = std::max(*p.hi, *s.hi);
          continue;
        }
      }
      out.push_back(s);
    }
    spans_ = std::move(out);
  }

  std::vector<Span> spans_;
};

struct BoolSet {
  bool t = false, f = false;
  static BoolSet both() { return {true, true}; }
  static BoolSet of(bool v) { return {v, !v}; }
  bool empty() const { return !t && !f; }
  BoolSet unioned(BoolSet o) const { return {t || o.t, f || o.f}; }
  bool subset_of(BoolSet o) const { return (!t || o.t) && (!f || o.f); }
  friend bool operator==(const BoolSet&, const BoolSet&) = default;
};

using StrSet = std::set<std::string>;

// A variable's possible values across the three sorts.
struct ValueSet {
  IntSet ints;
  StrSet strs;
  BoolSet bools;

  static ValueSet of_int(IntSet i) { return {std::move(i), {}, {}}; }
  static ValueSet of_str(StrSet s) { return {{}, std::move(s), {}}; }
  static ValueSet of_bool(BoolSet b) { return {{}, {}, b}; }

  bool empty() const { return ints.empty() && strs.empty() && bools.empty(); }
  ValueSet unioned(const ValueSet& o) const {
    ValueSet r;
    r.ints = ints.unioned(o.ints);
    r.strs = strs;
    r.strs.insert(o.strs.begin(), o.strs.end());
    r.bools = bools.unioned(o.bools);
    return r;
  }
  bool subset_of(const ValueSet& o) const {
    return ints.subset_of(o.ints) &&
           std::includes(o.strs.begin(), o.strs.end(), strs.begin(), strs.end()) &&
           bools.subset_of(o.bools);
  }
  friend bool operator==(const ValueSet&, const ValueSet&) = default;
};

// Collecting memory: absent variables are bound to the empty value set.
using CMemory = std::map<std::string, ValueSet>;

inline CMemory join(const CMemory& a, const CMemory& b) {
  CMemory r = a;
  for (const auto& [k, v] : b) {
    auto it = r.find(k);
    if (it == r.end())
      r.emplace(k, v);
    else
      it->second = it->second.unioned(v);
  }
  return r;
}

inline bool memory_leq(const CMemory& a, const CMemory& b) {
  for (const auto& [k, v] : a) {
    if (v.empty()) continue;
    auto it = b.find(k);
    if (it == b.end() || !v.subset_of(it->second)) return false;
  }
  return true;
}

}  // namespace sea
