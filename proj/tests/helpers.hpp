#pragma once
// Shared test utilities: seeded random automata/word generators and
// brute-force language oracles used to cross-check automaton operations.

#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>
#include <string>
#include <vector>

#include "sea/alphabet.hpp"
#include "sea/fa.hpp"

namespace sea::test {

inline std::set<std::string> lang_strings(const Fa& a, size_t max_count = 4096) {
  auto words = enumerate_language(a, max_count);
  REQUIRE(words.has_value());
  std::set<std::string> out;
  for (const auto& w : *words) out.insert(syms_str(w));
  return out;
}

inline std::set<std::string> strings_upto(const Fa& a, size_t max_len) {
  std::set<std::string> out;
  for (const auto& w : words_upto(a, max_len)) out.insert(syms_str(w));
  return out;
}

// Random NFA over a small alphabet; may have eps edges and unreachable parts.
inline Fa random_nfa(std::mt19937& rng, uint32_t max_states, const std::vector<Sym>& alpha,
                     bool allow_eps = true) {
  std::uniform_int_distribution<uint32_t> nstates(1, max_states);
  Fa a;
  a.num_states = nstates(rng);
  a.initial = std::uniform_int_distribution<uint32_t>(0, a.num_states - 1)(rng);
  a.accepting.assign(a.num_states, false);
  for (uint32_t s = 0; s < a.num_states; ++s) a.accepting[s] = rng() % 3 == 0;
  uint32_t nedges = std::uniform_int_distribution<uint32_t>(0, 3 * a.num_states)(rng);
  for (uint32_t i = 0; i < nedges; ++i) {
    uint32_t src = rng() % a.num_states, dst = rng() % a.num_states;
    Sym sym;
    if (allow_eps && rng() % 8 == 0)
      sym = kEps;
    else
      sym = alpha[rng() % alpha.size()];
    a.edges.push_back({src, sym, dst});
  }
  return a;
}

inline std::string random_word(std::mt19937& rng, const std::string& alpha, size_t max_len) {
  size_t len = rng() % (max_len + 1);
  std::string w;
  for (size_t i = 0; i < len; ++i) w.push_back(alpha[rng() % alpha.size()]);
  return w;
}

}  // namespace sea::test
