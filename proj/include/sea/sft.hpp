#pragma once
// Finite-state transducers with set guards. Rules either consume one input
// symbol from a guard set or none (epsilon); they emit nothing, a constant
// symbol, or a copy of the consumed symbol.

#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <vector>

#include "sea/fa.hpp"

namespace sea {

struct SftRule {
  uint32_t src = 0;
  // Input guard: the set of symbols this rule consumes; nullopt consumes none.
  std::optional<std::set<Sym>> guard;
  enum class Out { None, Copy, Emit } out = Out::None;
  Sym emit = 0;
  uint32_t dst = 0;
};

struct Sft {
  uint32_t num_states = 1;
  uint32_t initial = 0;
  std::vector<bool> accepting{false};
  std::vector<SftRule> rules;

  uint32_t add_state(bool acc = false) {
    accepting.push_back(acc);
    return num_states++;
  }
  void consume(uint32_t src, std::set<Sym> guard, uint32_t dst) {
    rules.push_back({src, std::move(guard), SftRule::Out::None, 0, dst});
  }
  void copy(uint32_t src, std::set<Sym> guard, uint32_t dst) {
    rules.push_back({src, std::move(guard), SftRule::Out::Copy, 0, dst});
  }
  void consume_emit(uint32_t src, std::set<Sym> guard, Sym out, uint32_t dst) {
    rules.push_back({src, std::move(guard), SftRule::Out::Emit, out, dst});
  }
  void eps_emit(uint32_t src, Sym out, uint32_t dst) {
    rules.push_back({src, std::nullopt, SftRule::Out::Emit, out, dst});
  }
  void eps_move(uint32_t src, uint32_t dst) {
    rules.push_back({src, std::nullopt, SftRule::Out::None, 0, dst});
  }
};

namespace sft_detail {

inline std::vector<std::vector<const SftRule*>> rules_by_src(const Sft& t) {
  std::vector<std::vector<const SftRule*>> by(t.num_states);
  for (const auto& r : t.rules) by[r.src].push_back(&r);
  return by;
}

}  // namespace sft_detail

// Does any run over the whole word reach an accepting state? Epsilon cycles
// are cut by keeping the set of (state, position) pairs on the search stack.
inline bool sft_accepts(const Sft& t, const std::vector<Sym>& word) {
  auto by = sft_detail::rules_by_src(t);
  std::set<std::pair<uint32_t, size_t>> seen;
  std::vector<std::pair<uint32_t, size_t>> stack{{t.initial, 0}};
  while (!stack.empty()) {
    auto [q, pos] = stack.back();
    stack.pop_back();
    if (!seen.insert({q, pos}).second) continue;
    if (pos == word.size() && t.accepting[q]) return true;
    for (const SftRule* r : by[q]) {
      if (!r->guard) {
        stack.push_back({r->dst, pos});
      } else if (pos < word.size() && r->guard->count(word[pos])) {
        stack.push_back({r->dst, pos + 1});
      }
    }
  }
  return false;
}

// All outputs over accepting runs on `word`. Runs are enumerated with an
// on-path guard against non-consuming cycles; emitting epsilon cycles would
// make the result infinite and are treated as an error by the guard.
inline std::set<std::vector<Sym>> transduce(const Sft& t, const std::vector<Sym>& word,
                                            size_t max_outputs = 4096) {
  auto by = sft_detail::rules_by_src(t);
  std::set<std::vector<Sym>> out;
  std::set<std::pair<uint32_t, size_t>> on_path;
  std::vector<Sym> acc;

  std::function<void(uint32_t, size_t)> go = [&](uint32_t q, size_t pos) {
    if (out.size() >= max_outputs) return;
    if (pos == word.size() && t.accepting[q]) out.insert(acc);
    if (!on_path.insert({q, pos}).second) return;
    for (const SftRule* r : by[q]) {
      size_t npos;
      if (!r->guard) {
        npos = pos;
      } else if (pos < word.size() && r->guard->count(word[pos])) {
        npos = pos + 1;
      } else {
        continue;
      }
      size_t emitted = 0;
      if (r->out == SftRule::Out::Emit) {
        acc.push_back(r->emit);
        emitted = 1;
      } else if (r->out == SftRule::Out::Copy) {
        acc.push_back(word[pos]);
        emitted = 1;
      }
      go(r->dst, npos);
      while (emitted--) acc.pop_back();
    }
    on_path.erase({q, pos});
  };
  go(t.initial, 0);
  return out;
}

// Automaton of every output the transducer can produce over any accepted
// input. Copy rules expand to one edge per guard symbol.
inline Fa output_fa(const Sft& t) {
  Fa a;
  a.num_states = t.num_states;
  a.initial = t.initial;
  a.accepting = t.accepting;
  for (const auto& r : t.rules) {
    switch (r.out) {
      case SftRule::Out::None:
        a.edges.push_back({r.src, kEps, r.dst});
        break;
      case SftRule::Out::Emit:
        a.edges.push_back({r.src, r.emit, r.dst});
        break;
      case SftRule::Out::Copy:
        for (Sym s : *r.guard) a.edges.push_back({r.src, s, r.dst});
        break;
    }
  }
  return a;
}

// Relational composition: feed every output symbol of `first` to `second`.
inline Sft compose(const Sft& first, const Sft& second) {
  Sft c;
  std::map<std::pair<uint32_t, uint32_t>, uint32_t> id;
  std::queue<std::pair<uint32_t, uint32_t>> todo;
  auto state = [&](uint32_t p, uint32_t q) {
    auto it = id.find({p, q});
    if (it != id.end()) return it->second;
    uint32_t s = id.empty() ? 0 : c.add_state();
    if (id.empty()) c.num_states = 1;
    id[{p, q}] = s;
    todo.push({p, q});
    return s;
  };
  state(first.initial, second.initial);
  c.initial = 0;
  auto by1 = sft_detail::rules_by_src(first);
  auto by2 = sft_detail::rules_by_src(second);
  while (!todo.empty()) {
    auto [p, q] = todo.front();
    todo.pop();
    uint32_t src = id[{p, q}];
    c.accepting[src] = first.accepting[p] && second.accepting[q];
    // second moves on its own epsilon input
    for (const SftRule* r2 : by2[q])
      if (!r2->guard)
        c.rules.push_back({src, std::nullopt, r2->out == SftRule::Out::Copy
                                                  ? SftRule::Out::None
                                                  : r2->out,
                           r2->emit, state(p, r2->dst)});
    for (const SftRule* r1 : by1[p]) {
      if (r1->out == SftRule::Out::None) {
        // first consumes (or moves) without feeding second
        c.rules.push_back({src, r1->guard, SftRule::Out::None, 0, state(r1->dst, q)});
        continue;
      }
      if (r1->out == SftRule::Out::Emit) {
        for (const SftRule* r2 : by2[q]) {
          if (!r2->guard || !r2->guard->count(r1->emit)) continue;
          SftRule nr;
          nr.src = src;
          nr.guard = r1->guard;
          // If second copies, it copies the symbol first emitted.
          nr.out = r2->out == SftRule::Out::Copy ? SftRule::Out::Emit : r2->out;
          nr.emit = r2->out == SftRule::Out::Copy ? r1->emit : r2->emit;
          nr.dst = state(r1->dst, r2->dst);
          c.rules.push_back(nr);
        }
        continue;
      }
      // Copy: the fed symbol equals the consumed one, so restrict the guard.
      for (const SftRule* r2 : by2[q]) {
        if (!r2->guard) continue;
        std::set<Sym> meet;
        for (Sym s : *r1->guard)
          if (r2->guard->count(s)) meet.insert(s);
        if (meet.empty()) continue;
        SftRule nr;
        nr.src = src;
        nr.guard = std::move(meet);
        nr.out = r2->out;  // a copy of a copy is still the input symbol
        nr.emit = r2->emit;
        nr.dst = state(r1->dst, r2->dst);
        c.rules.push_back(nr);
      }
    }
  }
  return c;
}

// Transducer that accepts exactly L(a) and copies it through.
inline Sft identity_sft(const Fa& a) {
  Sft t;
  t.num_states = a.num_states;
  t.initial = a.initial;
  t.accepting = a.accepting;
  for (const auto& e : a.edges) {
    if (e.sym == kEps)
      t.eps_move(e.src, e.dst);
    else
      t.copy(e.src, {e.sym}, e.dst);
  }
  return t;
}

// w -> w . suffix for every input w over `alphabet`.
inline Sft concat_sft(const std::vector<Sym>& suffix, const std::vector<Sym>& alphabet) {
  Sft t;
  std::set<Sym> all(alphabet.begin(), alphabet.end());
  t.copy(0, all, 0);
  uint32_t at = 0;
  for (Sym s : suffix) {
    uint32_t next = t.add_state();
    t.eps_emit(at, s, next);
    at = next;
  }
  if (at == 0) {
    t.accepting[0] = true;
  } else {
    t.accepting[at] = true;
  }
  return t;
}

// The 1-based substring window: skips n-1 symbols, copies m, skips the rest;
// accepts only inputs long enough to contain the whole window.
inline Sft substring_sft(long long n, long long m, const std::vector<Sym>& alphabet) {
  Sft t;
  std::set<Sym> all(alphabet.begin(), alphabet.end());
  uint32_t at = 0;
  for (long long i = 1; i < n; ++i) {
    uint32_t next = t.add_state();
    t.consume(at, all, next);
    at = next;
  }
  for (long long i = 0; i < m; ++i) {
    uint32_t next = t.add_state();
    t.copy(at, all, next);
    at = next;
  }
  t.accepting[at] = true;
  t.consume(at, all, at);  // trailing symbols are dropped
  return t;
}

// Image of a language: the automaton of outputs of t over words of a.
inline Fa transduce_fa(const Sft& t, const Fa& a) {
  return output_fa(compose(identity_sft(a), t));
}

// Same DOT dialect as automata; edges read "guard/output".
inline std::string sft_dot(const Sft& t, const std::function<std::string(Sym)>& namer) {
  auto esc = [](const std::string& s) {
    std::string r;
    for (char c : s) {
      if (c == '"' || c == '\\') r.push_back('\\');
      r.push_back(c);
    }
    return r;
  };
  auto guard_str = [&](const SftRule& r) {
    if (!r.guard) return std::string("eps");
    if (r.guard->size() == 1) return namer(*r.guard->begin());
    std::string s = "[";
    for (Sym g : *r.guard) s += namer(g);
    return s + "]";
  };
  auto out_str = [&](const SftRule& r) {
    switch (r.out) {
      case SftRule::Out::None:
        return std::string("eps");
      case SftRule::Out::Copy:
        return std::string("copy");
      case SftRule::Out::Emit:
        return namer(r.emit);
    }
    return std::string();
  };
  std::string out = "digraph sft {\n  rankdir=LR;\n  node [shape=circle];\n";
  out += "  __start [shape=point];\n";
  for (uint32_t s = 0; s < t.num_states; ++s)
    if (t.accepting[s]) out += "  q" + std::to_string(s) + " [shape=doublecircle];\n";
  out += "  __start -> q" + std::to_string(t.initial) + ";\n";
  for (const auto& r : t.rules)
    out += "  q" + std::to_string(r.src) + " -> q" + std::to_string(r.dst) + " [label=\"" +
           esc(guard_str(r) + "/" + out_str(r)) + "\"];\n";
  out += "}\n";
  return out;
}

}  // namespace sea
