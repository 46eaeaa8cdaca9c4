#pragma once
// Value alphabet: printable ASCII without the apex quote. Runtime strings
// range over exactly these symbols, so reflected code can never contain a
// string-literal delimiter.

#include <string>
#include <vector>

#include "sea/fa.hpp"

namespace sea {

inline constexpr char kApex = '\'';

inline bool in_sigma(char c) {
  return c >= 0x20 && c <= 0x7E && c != kApex;
}

inline const std::vector<Sym>& sigma_alphabet() {
  static const std::vector<Sym> syms = [] {
    std::vector<Sym> v;
    for (int c = 0x20; c <= 0x7E; ++c)
      if (c != kApex) v.push_back(static_cast<Sym>(c));
    return v;
  }();
  return syms;
}

inline std::vector<Sym> str_syms(const std::string& s) {
  std::vector<Sym> v;
  v.reserve(s.size());
  for (char c : s) v.push_back(static_cast<Sym>(static_cast<unsigned char>(c)));
  return v;
}

// Renders char symbols as themselves; out-of-range codes as #<n>.
inline std::string sym_str(Sym s) {
  if (s == kEps) return "eps";
  if (s < 256) return std::string(1, static_cast<char>(s));
  return "#" + std::to_string(s);
}

inline std::string syms_str(const std::vector<Sym>& w) {
  std::string s;
  for (Sym c : w) s += sym_str(c);
  return s;
}

inline Fa fa_word_str(const std::string& s) { return Fa::word(str_syms(s)); }

template <typename Container>
inline Fa fa_words_str(const Container& words) {
  Fa r = Fa::empty_language();
  bool first = true;
  for (const std::string& w : words) {
    Fa f = fa_word_str(w);
    r = first ? f : fa_union(r, f);
    first = false;
  }
  return canonical(r);
}

inline Fa fa_sigma_star() { return sigma_star(sigma_alphabet()); }

inline bool accepts_str(const Fa& a, const std::string& s) {
  return accepts(a, str_syms(s));
}

}  // namespace sea
