#pragma once
// JSON run reports and per-site DOT/text artifacts for the driver. Plain
// nlohmann json objects keep keys sorted, so identical inputs serialize to
// byte-identical reports.

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sea/abstract.hpp"
#include "sea/ast.hpp"
#include "sea/concrete.hpp"
#include "sea/domain.hpp"
#include "sea/fa.hpp"
#include "sea/stmsyn.hpp"

namespace sea {

using Json = nlohmann::json;

// FNV-1a over the source text; stable across platforms.
inline std::string source_digest(const std::string& src) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : src) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Transition table form; `namer` renders edge symbols (chars or units).
inline Json json_of_fa(const Fa& a, const std::function<std::string(Sym)>& namer) {
  Json j;
  j["states"] = a.num_states;
  j["initial"] = a.initial;
  Json acc = Json::array();
  for (uint32_t s = 0; s < a.num_states; ++s)
    if (a.accepting[s]) acc.push_back(s);
  j["accepting"] = std::move(acc);
  std::vector<FaEdge> es = a.edges;
  std::sort(es.begin(), es.end());
  Json edges = Json::array();
  for (const auto& e : es)
    edges.push_back(Json::array({e.src, e.sym == kEps ? "eps" : namer(e.sym), e.dst}));
  j["edges"] = std::move(edges);
  return j;
}

inline Json json_of_fa(const Fa& a) {
  return json_of_fa(a, [](Sym s) { return sym_str(s); });
}

inline Json json_of_abst(const AbstVal& v) {
  Json j;
  switch (v.sort) {
    case AbstVal::Sort::Top:
      j["kind"] = "top";
      break;
    case AbstVal::Sort::Bot:
      j["kind"] = "bot";
      break;
    case AbstVal::Sort::Int:
      j["kind"] = "int";
      j["lo"] = v.lo ? Json(*v.lo) : Json();
      j["hi"] = v.hi ? Json(*v.hi) : Json();
      break;
    case AbstVal::Sort::Bool:
      j["kind"] = "bool";
      j["true"] = v.bt;
      j["false"] = v.bf;
      break;
    case AbstVal::Sort::Str:
      j["kind"] = "str";
      j["fa"] = json_of_fa(v.fa);
      j["text"] = abst_str(v);
      break;
  }
  return j;
}

inline Json json_of_memory(const AbstMemory& m) {
  Json j = Json::object();
  for (const auto& [x, v] : m) j[x] = json_of_abst(v);
  return j;
}

inline Json json_of_store(const AbstStore& s) {
  Json j = Json::object();
  for (const auto& [line, m] : s) j[std::to_string(line)] = json_of_memory(m);
  return j;
}

// ---- concrete side ----------------------------------------------------------

inline Json json_of_values(const ValueSet& vs) {
  Json j = Json::object();
  if (!vs.ints.empty()) {
    Json spans = Json::array();
    for (const auto& sp : vs.ints.spans())
      spans.push_back(Json::array({sp.lo ? Json(*sp.lo) : Json(), sp.hi ? Json(*sp.hi) : Json()}));
    j["ints"] = std::move(spans);
  }
  if (vs.bools.t || vs.bools.f) {
    Json b = Json::array();
    if (vs.bools.f) b.push_back(false);
    if (vs.bools.t) b.push_back(true);
    j["bools"] = std::move(b);
  }
  if (!vs.strs.empty()) j["strs"] = std::vector<std::string>(vs.strs.begin(), vs.strs.end());
  return j;
}

inline Json json_of_cmemory(const CMemory& m) {
  Json j = Json::object();
  for (const auto& [x, vs] : m) j[x] = json_of_values(vs);
  return j;
}

inline Json json_of_cstore(const CStore& s) {
  Json j = Json::object();
  for (const auto& [line, m] : s) j[std::to_string(line)] = json_of_cmemory(m);
  return j;
}

inline Json json_of_value(const Value& v) {
  switch (v.kind) {
    case Value::Kind::Int:
      return v.i;
    case Value::Kind::Bool:
      return v.b;
    case Value::Kind::Str:
      return v.s;
  }
  return {};
}

inline Json json_of_env(const Env& env) {
  Json j = Json::object();
  for (const auto& [x, v] : env) j[x] = json_of_value(v);
  return j;
}

// ---- sites and whole runs -----------------------------------------------------

inline Json json_of_analysis(const AnalysisResult& res);

inline Json json_of_site(const SiteRecord& s) {
  Json j;
  j["line"] = s.line;
  j["depth"] = s.depth;
  j["input"] = json_of_abst(s.input);
  j["cutoff"] = s.cutoff;
  j["havoc"] = s.havoc;
  j["havoc_vars"] = s.havoc_vars;
  if (s.ran_pipeline) {
    auto units = [&](Sym u) { return s.synthesis.statements.units.word(u); };
    auto eunits = [&](Sym u) { return s.synthesis.executable.units.word(u); };
    j["sliced"] = s.synthesis.sliced;
    j["statements"] = json_of_fa(s.synthesis.statements.fa, units);
    j["executable"] = json_of_fa(s.synthesis.executable.fa, eunits);
    j["regex"] = s.synthesis.regex_text;
    j["degraded"] = s.synthesis.degraded();
    j["program"] = s.synthesis.synthesis.program
                       ? Json(pretty_print(*s.synthesis.synthesis.program))
                       : Json();
  }
  j["sub"] = s.sub ? json_of_analysis(*s.sub) : Json();
  return j;
}

inline Json json_of_analysis(const AnalysisResult& res) {
  Json j;
  j["store"] = json_of_store(res.store);
  j["exit"] = json_of_memory(res.exit);
  Json sites = Json::array();
  for (const auto& s : res.sites) sites.push_back(json_of_site(s));
  j["sites"] = std::move(sites);
  j["warnings"] = res.warnings;
  return j;
}

inline Json json_of_config(const AnalysisConfig& cfg) {
  Json j;
  j["widen_n"] = cfg.widen_n;
  j["tower_threshold"] = cfg.tower_threshold;
  j["loop_widen_delay"] = cfg.loop_widen_delay;
  j["interval_thresholds"] = cfg.interval_thresholds;
  j["enum_cap"] = cfg.enum_cap;
  return j;
}

inline Json json_of_program(const std::string& src, const LabeledProgram& lp) {
  Json j;
  j["digest"] = source_digest(src);
  Json lines = Json::object();
  for (uint32_t i = 1; i < lp.lines.size(); ++i) lines[std::to_string(i)] = lp.lines[i].text;
  j["lines"] = std::move(lines);
  return j;
}

// ---- artifact files -------------------------------------------------------------

namespace report_detail {

inline void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << body;
  if (!out.flush()) throw std::runtime_error("write failed for " + path);
}

inline void emit_site_files(const SiteRecord& s, const std::string& dir, const std::string& prefix,
                            std::vector<std::string>& written) {
  std::string base = dir + "/" + prefix;
  auto record = [&](const std::string& suffix, const std::string& body) {
    write_file(base + suffix, body);
    written.push_back(prefix + suffix);
  };
  if (s.input.sort == AbstVal::Sort::Str || s.input.is_top()) {
    Fa in = s.input.is_top() ? fa_sigma_star() : s.input.fa;
    record("_input.dot", to_dot(in, [](Sym c) { return sym_str(c); }));
  }
  if (s.ran_pipeline) {
    auto units = [&](Sym u) { return s.synthesis.statements.units.word(u); };
    auto eunits = [&](Sym u) { return s.synthesis.executable.units.word(u); };
    record("_stmsyn.dot", to_dot(s.synthesis.statements.fa, units));
    record("_exec.dot", to_dot(s.synthesis.executable.fa, eunits));
    record("_regex.txt", s.synthesis.regex_text + "\n");
    if (s.synthesis.synthesis.program)
      record("_program.sea", pretty_print(*s.synthesis.synthesis.program));
  }
  if (s.sub)
    for (const auto& nested : s.sub->sites)
      emit_site_files(nested, dir, prefix + "_" + std::to_string(nested.line), written);
}

}  // namespace report_detail

// One artifact set per reflect site; nested sites extend the name with the
// tower path, e.g. site5_1_input.dot for line 1 of line 5's sub-analysis.
inline std::vector<std::string> emit_dot(const AnalysisResult& res, const std::string& dir) {
  std::vector<std::string> written;
  for (const auto& s : res.sites)
    report_detail::emit_site_files(s, dir, "site" + std::to_string(s.line), written);
  return written;
}

}  // namespace sea
