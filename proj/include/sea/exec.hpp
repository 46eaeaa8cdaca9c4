#pragma once
// End-to-end synthesis for one reflection site: slice the string automaton
// into statement units, keep the well-formed ones, extract a regular
// expression, and assemble the covering program.

#include <optional>
#include <string>

#include "sea/fa.hpp"
#include "sea/progsyn.hpp"
#include "sea/regex.hpp"
#include "sea/stmsyn.hpp"

namespace sea {

struct SiteSynthesis {
  Fa input;              // value automaton handed to the site
  bool sliced = false;   // false when the language has no finite unit slicing
  StmAut statements;     // every sliced unit
  StmAut executable;     // units surviving the well-formedness filter
  RegexPtr regex;        // over the executable units
  std::string regex_text;
  SynthesisResult synthesis;

  // The synthesized program, when there is one, covers only part of the
  // language; a degraded site needs a coarse fallback on top.
  bool degraded() const { return !sliced || synthesis.degraded; }
};

inline SiteSynthesis exe_pipeline(const Fa& value_fa) {
  SiteSynthesis site;
  site.input = value_fa;
  site.regex = rx_empty();
  auto sliced = stm_syn(value_fa);
  if (!sliced) {
    site.regex_text = regex_str(site.regex, [](Sym) { return std::string(); });
    return site;
  }
  site.sliced = true;
  site.statements = std::move(*sliced);
  site.executable = filter_executable(site.statements);
  site.regex = regex_of(site.executable.fa);
  site.regex_text =
      regex_str(site.regex, [&](Sym s) { return site.executable.units.word(s); });
  site.synthesis = synthesize(site.regex, site.executable.units);
  return site;
}

}  // namespace sea
