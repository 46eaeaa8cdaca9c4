// sea: string executability analysis for CommS programs.
//
// Modes:
//   sea analyze FILE    abstract run; per-line abstract store plus one
//                       synthesized over-approximating program per reflect
//   sea concrete FILE   collecting oracle along one trace with a seeded rng
//   sea diff FILE       both runs; checks every concrete per-line value set
//                       is covered by the abstract store
//
// The report is JSON on stdout, or written to --json PATH. Exit codes:
// 0 success, 1 source parse error, 2 usage or configuration error, 3 diff
// found a containment violation.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sea/abstract.hpp"
#include "sea/concrete.hpp"
#include "sea/domain.hpp"
#include "sea/parser.hpp"
#include "sea/report.hpp"

namespace {

using namespace sea;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One --input binding. The abstract side always has a value; the concrete
// oracle can only use bindings whose denotation is a finite set.
struct InputVal {
  AbstVal abst = AbstVal::bot();
  std::optional<ValueSet> finite;
};

std::optional<long long> parse_int(const std::string& s) {
  if (s.empty()) return std::nullopt;
  size_t i = s[0] == '-' ? 1 : 0;
  if (i == s.size()) return std::nullopt;
  for (size_t k = i; k < s.size(); ++k)
    if (!std::isdigit(static_cast<unsigned char>(s[k]))) return std::nullopt;
  try {
    return std::stoll(s);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

bool is_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

// Value grammar for --input var=VALUE:
//   top              any value at all
//   42               the integer 42
//   [lo,hi]          an integer range; lo may be -inf, hi may be inf
//   true | false     a boolean
//   {w1,w2,...}      a finite word set; commas separate, words are verbatim
//   sigma*           any string
InputVal parse_input_value(const std::string& var, const std::string& text) {
  auto fail = [&](const std::string& why) -> InputVal {
    throw UsageError("--input " + var + ": " + why);
  };
  if (text == "top") return {AbstVal::top(), std::nullopt};
  if (text == "sigma*") return {AbstVal::strings(fa_sigma_star()), std::nullopt};
  if (text == "true" || text == "false") {
    bool b = text == "true";
    return {AbstVal::bools(b, !b), ValueSet::of_bool(BoolSet::of(b))};
  }
  if (auto n = parse_int(text))
    return {AbstVal::interval(*n, *n), ValueSet::of_int(IntSet::point(*n))};
  if (text.size() >= 2 && text.front() == '[' && text.back() == ']') {
    std::string body = text.substr(1, text.size() - 2);
    size_t comma = body.find(',');
    if (comma == std::string::npos) return fail("interval needs a comma, as in [0,9]");
    std::string ls = body.substr(0, comma), hs = body.substr(comma + 1);
    std::optional<long long> lo, hi;
    if (ls != "-inf") {
      lo = parse_int(ls);
      if (!lo) return fail("bad lower bound '" + ls + "'");
    }
    if (hs != "inf") {
      hi = parse_int(hs);
      if (!hi) return fail("bad upper bound '" + hs + "'");
    }
    if (lo && hi && *lo > *hi) return fail("empty interval");
    InputVal out{AbstVal::interval(lo, hi), std::nullopt};
    if (lo && hi) out.finite = ValueSet::of_int(IntSet::range(lo, hi));
    return out;
  }
  if (text.size() >= 2 && text.front() == '{' && text.back() == '}') {
    std::string body = text.substr(1, text.size() - 2);
    StrSet words;
    std::string cur;
    for (char c : body) {
      if (c == ',') {
        words.insert(cur);
        cur.clear();
      } else {
        if (!in_sigma(c)) return fail(std::string("character '") + c + "' is outside the value alphabet");
        cur += c;
      }
    }
    words.insert(cur);
    return {AbstVal::strings(fa_words_str(words)), ValueSet::of_str(std::move(words))};
  }
  return fail("cannot read value '" + text + "'");
}

std::map<std::string, InputVal> parse_inputs(const std::vector<std::string>& raw,
                                             const char* flag) {
  std::map<std::string, InputVal> out;
  for (const std::string& item : raw) {
    size_t eq = item.find('=');
    if (eq == std::string::npos)
      throw UsageError(std::string(flag) + " needs var=VALUE, got '" + item + "'");
    std::string var = item.substr(0, eq);
    if (!is_identifier(var))
      throw UsageError(std::string(flag) + ": '" + var + "' is not a variable name");
    out[var] = parse_input_value(var, item.substr(eq + 1));
  }
  return out;
}

Json raw_bindings(const std::vector<std::string>& items) {
  Json j = Json::object();
  for (const std::string& item : items) {
    size_t eq = item.find('=');
    j[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return j;
}

// Trace-driving value for a finite input set: least integer, else the
// lexicographically first word, else false when possible.
Value representative(const ValueSet& vs) {
  if (!vs.ints.empty()) return Value::of(*vs.ints.min());
  if (!vs.strs.empty()) return Value::of(*vs.strs.begin());
  return Value::of(vs.bools.f ? false : true);
}

ValueSet singleton_set(const Value& v) {
  switch (v.kind) {
    case Value::Kind::Int:
      return ValueSet::of_int(IntSet::point(v.i));
    case Value::Kind::Bool:
      return ValueSet::of_bool(BoolSet::of(v.b));
    case Value::Kind::Str:
      return ValueSet::of_str({v.s});
  }
  return {};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw UsageError("read failed for " + path);
  return ss.str();
}

struct Options {
  std::string mode;
  std::string file;
  uint32_t widen_n = 3;
  uint32_t tower_threshold = 4;
  size_t max_trace_len = 100000;
  uint32_t max_tower = 8;
  uint64_t seed = 0;
  std::vector<std::string> raw_inputs;
  std::vector<std::string> raw_concrete_inputs;
  std::string json_path;
  std::string dot_dir;
  bool no_timing = false;
};

int run(const Options& opt) {
  if (opt.widen_n < 1) throw UsageError("--widen-n must be at least 1");
  if (opt.tower_threshold < 1) throw UsageError("--tower-threshold must be at least 1");
  if (opt.max_tower < 1) throw UsageError("--max-tower must be at least 1");

  auto inputs = parse_inputs(opt.raw_inputs, "--input");
  bool needs_oracle = opt.mode != "analyze";
  if (!needs_oracle && !opt.raw_concrete_inputs.empty())
    throw UsageError("--concrete-input has no effect in analyze mode");
  auto oracle_inputs = inputs;
  for (auto& [var, iv] : parse_inputs(opt.raw_concrete_inputs, "--concrete-input"))
    oracle_inputs[var] = std::move(iv);
  if (needs_oracle)
    for (const auto& [var, iv] : oracle_inputs)
      if (!iv.finite)
        throw UsageError("binding for " + var + ": " + opt.mode + " mode needs a finite value");

  std::string src;
  LabeledProgram lp;
  try {
    src = read_file(opt.file);
    lp = label(parse_program(src, ParseOptions{.reject_guard_vars = true}));
  } catch (const ParseError& e) {
    std::cerr << opt.file << ": " << e.what() << "\n";
    return 1;
  }

  AnalysisConfig acfg;
  acfg.widen_n = opt.widen_n;
  acfg.tower_threshold = opt.tower_threshold;

  Json rep;
  rep["mode"] = opt.mode;
  rep["program"] = json_of_program(src, lp);
  Json cfg = json_of_config(acfg);
  cfg["seed"] = opt.seed;
  cfg["max_trace_len"] = opt.max_trace_len;
  cfg["max_tower"] = opt.max_tower;
  cfg["inputs"] = raw_bindings(opt.raw_inputs);
  cfg["concrete_inputs"] = raw_bindings(opt.raw_concrete_inputs);
  rep["config"] = cfg;

  auto t0 = std::chrono::steady_clock::now();

  std::optional<AnalysisResult> ares;
  if (opt.mode != "concrete") {
    AbstMemory entry;
    for (const auto& [var, iv] : inputs) entry[var] = iv.abst;
    ares = analyze(lp, entry, acfg);
    rep.update(json_of_analysis(*ares));
  }

  std::optional<CollectResult> cres;
  std::string trace_error;
  if (needs_oracle) {
    Env env;
    CMemory init;
    for (const auto& [var, iv] : oracle_inputs) {
      init[var] = *iv.finite;
      env[var] = representative(*iv.finite);
    }
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<long long> dist(0, 9);
    RandFn rand = [&]() { return dist(rng); };
    CollectLimits lims;
    lims.max_steps = opt.max_trace_len;
    lims.max_tower = opt.max_tower;
    try {
      cres = run_collecting(lp, env, init, rand, lims);
    } catch (const TraceError& e) {
      trace_error = e.what();
    }
  }

  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

  if (opt.mode == "concrete") {
    if (cres) {
      rep["store"] = json_of_cstore(cres->store);
      rep["exit"] = json_of_env(cres->exit_env);
      Json runs = Json::array();
      for (const ReflectRun& r : cres->reflect_runs)
        runs.push_back(Json{{"depth", r.depth}, {"line", r.site_line}, {"word", r.word}});
      rep["reflect_runs"] = runs;
    } else {
      rep["trace_error"] = trace_error;
    }
  }

  bool violation = false;
  if (opt.mode == "diff") {
    Json diff;
    if (cres) {
      Json verdicts = Json::array();
      auto check = [&](const std::string& at, const std::string& var, const ValueSet& vs,
                       const AbstMemory* am) {
        if (vs.empty()) return;
        AbstVal a = AbstVal::bot();
        if (am) {
          auto it = am->find(var);
          if (it != am->end()) a = it->second;
        }
        bool ok = gamma_covers(a, vs);
        if (!ok) violation = true;
        verdicts.push_back(Json{{"at", at}, {"var", var}, {"covered", ok}});
      };
      for (const auto& [line, cm] : cres->store) {
        auto it = ares->store.find(line);
        const AbstMemory* am = it == ares->store.end() ? nullptr : &it->second;
        for (const auto& [var, vs] : cm) check(std::to_string(line), var, vs, am);
      }
      for (const auto& [var, val] : cres->exit_env)
        check("exit", var, singleton_set(val), &ares->exit);
      diff["verdicts"] = verdicts;
      diff["violation"] = violation;
      diff["concrete"] = Json{{"store", json_of_cstore(cres->store)},
                              {"exit", json_of_env(cres->exit_env)}};
    } else {
      diff["trace_error"] = trace_error;
      diff["violation"] = false;
    }
    rep["diff"] = diff;
  }

  if (!opt.dot_dir.empty()) {
    std::vector<std::string> files;
    if (ares) {
      std::filesystem::create_directories(opt.dot_dir);
      files = emit_dot(*ares, opt.dot_dir);
      std::sort(files.begin(), files.end());
    }
    rep["artifacts"] = files;
  }
  if (!opt.no_timing) rep["timing_ms"] = ms;

  std::string body = rep.dump(2) + "\n";
  if (opt.json_path.empty())
    std::cout << body;
  else
    report_detail::write_file(opt.json_path, body);
  return violation ? 3 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"string executability analysis for CommS programs"};
  app.add_option("mode", opt.mode, "analyze, concrete, or diff")
      ->required()
      ->check(CLI::IsMember({"analyze", "concrete", "diff"}));
  app.add_option("file", opt.file, "CommS source file")->required();
  app.add_option("--widen-n", opt.widen_n, "language widening depth parameter")
      ->capture_default_str();
  app.add_option("--tower-threshold", opt.tower_threshold,
                 "reflection depth at which nested code is cut off to top")
      ->capture_default_str();
  app.add_option("--max-trace-len", opt.max_trace_len, "concrete step budget")
      ->capture_default_str();
  app.add_option("--max-tower", opt.max_tower, "concrete reflection depth bound")
      ->capture_default_str();
  app.add_option("--seed", opt.seed, "seed for the concrete rand stream, uniform over 0..9")
      ->capture_default_str();
  app.add_option("--input", opt.raw_inputs,
                 "initial binding var=VALUE; VALUE is top, an integer, [lo,hi], "
                 "true, false, {w1,w2,...}, or sigma*")
      ->take_all();
  app.add_option("--concrete-input", opt.raw_concrete_inputs,
                 "override a binding on the oracle side only (concrete and diff modes)")
      ->take_all();
  app.add_option("--json", opt.json_path, "write the JSON report here instead of stdout");
  app.add_option("--emit-dot", opt.dot_dir, "write per-site automata and programs to this directory");
  app.add_flag("--no-timing", opt.no_timing, "omit timing from the report, making it byte stable");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    return run(opt);
  } catch (const UsageError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
}
