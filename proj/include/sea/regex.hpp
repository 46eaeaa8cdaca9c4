#pragma once
// Regular expressions over arbitrary symbols, extraction from automata by
// state elimination, and the Thompson construction back to automata.

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "sea/fa.hpp"

namespace sea {

struct Regex;
using RegexPtr = std::shared_ptr<const Regex>;

struct Regex {
  enum class Kind { Empty, Eps, Atom, Alt, Cat, Star };
  Kind kind = Kind::Empty;
  Sym sym = 0;
  RegexPtr a, b;
};

inline RegexPtr rx_empty() {
  static const RegexPtr e = std::make_shared<Regex>(Regex{Regex::Kind::Empty, 0, nullptr, nullptr});
  return e;
}
inline RegexPtr rx_eps() {
  static const RegexPtr e = std::make_shared<Regex>(Regex{Regex::Kind::Eps, 0, nullptr, nullptr});
  return e;
}
inline RegexPtr rx_atom(Sym s) {
  return std::make_shared<Regex>(Regex{Regex::Kind::Atom, s, nullptr, nullptr});
}

inline bool rx_equal(const RegexPtr& x, const RegexPtr& y) {
  if (x == y) return true;
  if (!x || !y) return false;
  if (x->kind != y->kind || x->sym != y->sym) return false;
  return rx_equal(x->a, y->a) && rx_equal(x->b, y->b);
}

inline RegexPtr rx_alt(const RegexPtr& x, const RegexPtr& y) {
  if (x->kind == Regex::Kind::Empty) return y;
  if (y->kind == Regex::Kind::Empty) return x;
  if (rx_equal(x, y)) return x;
  if (x->kind == Regex::Kind::Eps && y->kind == Regex::Kind::Star) return y;
  if (y->kind == Regex::Kind::Eps && x->kind == Regex::Kind::Star) return x;
  return std::make_shared<Regex>(Regex{Regex::Kind::Alt, 0, x, y});
}

inline RegexPtr rx_cat(const RegexPtr& x, const RegexPtr& y) {
  if (x->kind == Regex::Kind::Empty || y->kind == Regex::Kind::Empty) return rx_empty();
  if (x->kind == Regex::Kind::Eps) return y;
  if (y->kind == Regex::Kind::Eps) return x;
  return std::make_shared<Regex>(Regex{Regex::Kind::Cat, 0, x, y});
}

inline RegexPtr rx_star(const RegexPtr& x) {
  if (x->kind == Regex::Kind::Empty || x->kind == Regex::Kind::Eps) return rx_eps();
  if (x->kind == Regex::Kind::Star) return x;
  return std::make_shared<Regex>(Regex{Regex::Kind::Star, 0, x, nullptr});
}

// State elimination on a generalized automaton. States with no self loop and
// a small in-degree times out-degree product go first, which keeps the result
// compact on the chain-and-loop shapes the analysis produces.
inline RegexPtr regex_of(const Fa& input) {
  Fa a = trim(input);
  if (is_empty_language(a)) return rx_empty();
  uint32_t n = a.num_states;
  uint32_t init = n, fin = n + 1;
  std::map<std::pair<uint32_t, uint32_t>, RegexPtr> r;
  auto get = [&](uint32_t i, uint32_t j) {
    auto it = r.find({i, j});
    return it == r.end() ? rx_empty() : it->second;
  };
  auto add = [&](uint32_t i, uint32_t j, const RegexPtr& e) {
    if (e->kind == Regex::Kind::Empty) return;
    r[{i, j}] = rx_alt(get(i, j), e);
  };
  for (const auto& e : a.edges) add(e.src, e.dst, e.sym == kEps ? rx_eps() : rx_atom(e.sym));
  add(init, a.initial, rx_eps());
  for (uint32_t s = 0; s < n; ++s)
    if (a.accepting[s]) add(s, fin, rx_eps());

  std::vector<bool> gone(n, false);
  for (uint32_t round = 0; round < n; ++round) {
    uint32_t best = n;
    long long best_key = -1;
    bool best_self = true;
    for (uint32_t s = 0; s < n; ++s) {
      if (gone[s]) continue;
      long long in = 0, out = 0;
      bool self = r.count({s, s}) > 0;
      for (const auto& [k, v] : r) {
        if (k.second == s && k.first != s) ++in;
        if (k.first == s && k.second != s) ++out;
      }
      long long key = in * out;
      if (best == n || std::pair(self, key) < std::pair(best_self, best_key)) {
        best = s;
        best_key = key;
        best_self = self;
      }
    }
    uint32_t s = best;
    gone[s] = true;
    // Edges of already eliminated states were erased, so the endpoints seen
    // here are all still live (or the fresh entry and exit states).
    RegexPtr loop = rx_star(get(s, s));
    std::vector<std::pair<uint32_t, RegexPtr>> into, outof;
    for (const auto& [k, v] : r) {
      if (k.second == s && k.first != s) into.push_back({k.first, v});
      if (k.first == s && k.second != s) outof.push_back({k.second, v});
    }
    for (const auto& [i, ri] : into)
      for (const auto& [j, rj] : outof) add(i, j, rx_cat(ri, rx_cat(loop, rj)));
    for (auto it = r.begin(); it != r.end();)
      if (it->first.first == s || it->first.second == s)
        it = r.erase(it);
      else
        ++it;
  }
  return get(init, fin);
}

// Thompson construction.
inline Fa fa_of_regex(const RegexPtr& e) {
  switch (e->kind) {
    case Regex::Kind::Empty:
      return Fa::empty_language();
    case Regex::Kind::Eps:
      return Fa::epsilon();
    case Regex::Kind::Atom:
      return Fa::word({e->sym});
    case Regex::Kind::Alt:
      return fa_union(fa_of_regex(e->a), fa_of_regex(e->b));
    case Regex::Kind::Cat:
      return fa_concat(fa_of_regex(e->a), fa_of_regex(e->b));
    case Regex::Kind::Star:
      return fa_star(fa_of_regex(e->a));
  }
  return Fa::empty_language();
}

// Display form: atoms print through `name`, alternation binds loosest, then
// concatenation, then star; composite star and alternation bodies take
// parentheses.
inline std::string regex_str(const RegexPtr& e, const std::function<std::string(Sym)>& name) {
  auto wrap = [&](const RegexPtr& x) {
    std::string s = regex_str(x, name);
    return x->kind == Regex::Kind::Alt ? "(" + s + ")" : s;
  };
  switch (e->kind) {
    case Regex::Kind::Empty:
      return "<none>";
    case Regex::Kind::Eps:
      return "<empty>";
    case Regex::Kind::Atom:
      return name(e->sym);
    case Regex::Kind::Alt:
      return regex_str(e->a, name) + " | " + regex_str(e->b, name);
    case Regex::Kind::Cat:
      return wrap(e->a) + wrap(e->b);
    case Regex::Kind::Star:
      return "(" + regex_str(e->a, name) + ")*";
  }
  return "";
}

}  // namespace sea
