#pragma once
// From a string automaton to a statement automaton: words are quoted, walked
// from punctuation to punctuation, and each slice becomes one edge labeled by
// an interned statement unit such as "x:=x+1;" or "if x<3 {".

#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "sea/alphabet.hpp"
#include "sea/fa.hpp"
#include "sea/lexparse.hpp"
#include "sea/parser.hpp"

namespace sea {

// Statement units are interned above both the character and marker ranges.
constexpr Sym kUnitBase = 0x10000;

class WordTable {
 public:
  Sym intern(const std::string& w) {
    auto it = index_.find(w);
    if (it != index_.end()) return it->second;
    Sym s = kUnitBase + static_cast<Sym>(words_.size());
    words_.push_back(w);
    index_.emplace(w, s);
    return s;
  }
  const std::string& word(Sym s) const { return words_.at(s - kUnitBase); }
  std::optional<Sym> lookup(const std::string& w) const {
    auto it = index_.find(w);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  size_t size() const { return words_.size(); }

 private:
  std::vector<std::string> words_;
  std::map<std::string, Sym> index_;
};

struct StmAut {
  Fa fa;
  WordTable units;
};

// Wraps every word of the language in apex quotes, marking word boundaries
// for the statement walk.
inline Fa quote(const Fa& a) {
  Fa q = a;
  uint32_t init = q.num_states++;
  uint32_t fin = q.num_states++;
  q.accepting.resize(q.num_states, false);
  q.edges.push_back({init, Sym(kApex), a.initial});
  for (uint32_t s = 0; s < a.num_states; ++s)
    if (a.accepting[s]) q.edges.push_back({s, Sym(kApex), fin});
  q.initial = init;
  for (uint32_t s = 0; s + 1 < q.num_states; ++s) q.accepting[s] = false;
  q.accepting[fin] = true;
  return q;
}

namespace stmsyn_detail {

inline bool is_punct_sym(Sym s) {
  return s == Sym(';') || s == Sym('{') || s == Sym('}') || s == Sym('$');
}

// A cycle made only of non-punctuation characters would need infinitely many
// distinct units, so the construction refuses such automata.
inline bool has_punct_free_cycle(const Fa& a) {
  std::vector<std::vector<uint32_t>> adj(a.num_states);
  for (const auto& e : a.edges)
    if (e.sym != kEps && !is_punct_sym(e.sym) && e.sym != Sym(kApex))
      adj[e.src].push_back(e.dst);
  std::vector<int> color(a.num_states, 0);
  std::vector<std::pair<uint32_t, size_t>> stack;
  for (uint32_t s = 0; s < a.num_states; ++s) {
    if (color[s]) continue;
    stack.push_back({s, 0});
    color[s] = 1;
    while (!stack.empty()) {
      auto& [q, i] = stack.back();
      if (i < adj[q].size()) {
        uint32_t n = adj[q][i++];
        if (color[n] == 1) return true;
        if (color[n] == 0) {
          color[n] = 1;
          stack.push_back({n, 0});
        }
      } else {
        color[q] = 2;
        stack.pop_back();
      }
    }
  }
  return false;
}

}  // namespace stmsyn_detail

// Builds the statement automaton of a string automaton, or nothing when the
// language cannot be sliced into finitely many units (a punctuation-free
// cycle) or the walk exceeds `max_units` distinct edges.
inline std::optional<StmAut> stm_syn(const Fa& value_fa, size_t max_units = 20000) {
  StmAut out;
  if (is_empty_language(value_fa)) {
    out.fa = Fa::empty_language();
    return out;
  }
  Fa a = canonical(quote(value_fa));
  if (stmsyn_detail::has_punct_free_cycle(a)) return std::nullopt;

  // Deterministic transition map of the quoted automaton.
  std::vector<std::map<Sym, uint32_t>> next(a.num_states);
  for (const auto& e : a.edges) next[e.src][e.sym] = e.dst;

  auto start_it = next[a.initial].find(Sym(kApex));
  if (start_it == next[a.initial].end()) {
    out.fa = Fa::empty_language();
    return out;
  }
  uint32_t start = start_it->second;

  std::map<uint32_t, uint32_t> boundary;  // quoted state -> unit state
  std::vector<bool> accepting;
  std::vector<FaEdge> edges;
  std::queue<uint32_t> todo;
  auto boundary_id = [&](uint32_t q) {
    auto it = boundary.find(q);
    if (it != boundary.end()) return it->second;
    uint32_t id = static_cast<uint32_t>(boundary.size());
    boundary.emplace(q, id);
    accepting.push_back(false);
    todo.push(q);
    return id;
  };
  uint32_t init = boundary_id(start);

  bool overflow = false;
  while (!todo.empty() && !overflow) {
    uint32_t b = todo.front();
    todo.pop();
    uint32_t bid = boundary.at(b);
    // Walk all character paths from this boundary to the next punctuation.
    // Punctuation-free subgraphs are acyclic here, so the recursion is finite.
    std::string word;
    std::function<void(uint32_t)> walk = [&](uint32_t q) {
      if (overflow) return;
      for (const auto& [sym, dst] : next[q]) {
        if (sym == Sym(kApex)) {
          // Closing quote: an empty pending word marks finality; pending
          // characters would be an unterminated statement and are dropped.
          if (word.empty()) accepting[bid] = true;
          continue;
        }
        if (stmsyn_detail::is_punct_sym(sym)) {
          std::string unit = word + static_cast<char>(sym);
          edges.push_back({bid, out.units.intern(unit), boundary_id(dst)});
          if (edges.size() > max_units) overflow = true;
          continue;
        }
        word.push_back(static_cast<char>(sym));
        walk(dst);
        word.pop_back();
      }
    };
    walk(b);
  }
  if (overflow) return std::nullopt;

  out.fa.num_states = static_cast<uint32_t>(boundary.size());
  out.fa.initial = init;
  out.fa.accepting = accepting;
  out.fa.edges = std::move(edges);
  out.fa = trim(out.fa);
  return out;
}

// Keeps only edges whose unit both passes the lexer/parser screen and
// reparses exactly in the shape its punctuation promises.
inline StmAut filter_executable(const StmAut& in) {
  StmAut out;
  out.fa.num_states = in.fa.num_states;
  out.fa.initial = in.fa.initial;
  out.fa.accepting = in.fa.accepting;
  std::map<Sym, bool> keep;
  for (const auto& e : in.fa.edges) {
    auto it = keep.find(e.sym);
    if (it == keep.end()) {
      const std::string& unit = in.units.word(e.sym);
      std::string word = unit.substr(0, unit.size() - 1);
      char punct = unit.back();
      bool ok = screen_accepts(unit) && classify_unit(word, punct).has_value();
      it = keep.emplace(e.sym, ok).first;
    }
    if (!it->second) continue;
    out.fa.edges.push_back({e.src, out.units.intern(in.units.word(e.sym)), e.dst});
  }
  out.fa = trim(out.fa);
  return out;
}

}  // namespace sea
