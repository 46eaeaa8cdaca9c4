#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>
#include <string>
#include <vector>

#include "sea/concrete.hpp"
#include "sea/parser.hpp"
#include "sea/values.hpp"

using namespace sea;

namespace {

const RandFn kRand7 = []() -> long long { return 7; };

IntSet ints(std::initializer_list<long long> vs) { return IntSet::of(vs); }

std::set<long long> members(const IntSet& s, long long lo = -64, long long hi = 64) {
  std::set<long long> out;
  for (long long v = lo; v <= hi; ++v)
    if (s.contains(v)) out.insert(v);
  return out;
}

CMemory mem(std::initializer_list<std::pair<std::string, ValueSet>> vs) {
  CMemory m;
  for (auto& [k, v] : vs) m[k] = v;
  return m;
}

ValueSet vints(std::initializer_list<long long> vs) { return ValueSet::of_int(IntSet::of(vs)); }
ValueSet vstrs(std::initializer_list<std::string> vs) { return ValueSet::of_str(StrSet(vs)); }

ValueSet ev(const std::string& expr, const CMemory& m) { return eval_set(*parse_expr(expr), m); }

// Equality up to empty bindings.
bool same_memory(const CMemory& a, const CMemory& b) {
  return memory_leq(a, b) && memory_leq(b, a);
}

}  // namespace

TEST_CASE("integer span sets behave like sets of integers") {
  std::mt19937 rng(811);
  auto random_set = [&]() {
    IntSet s;
    int n = rng() % 4;
    for (int i = 0; i < n; ++i) {
      long long a = static_cast<long long>(rng() % 31) - 15;
      long long b = a + rng() % 5;
      s = s.unioned(IntSet::range(a, b));
    }
    return s;
  };
  for (int iter = 0; iter < 300; ++iter) {
    IntSet a = random_set(), b = random_set();
    auto ma = members(a), mb = members(b);

    auto mu = members(a.unioned(b));
    auto mi = members(a.intersect(b));
    std::set<long long> eu = ma, ei, es, eadd;
    eu.insert(mb.begin(), mb.end());
    for (long long v : ma)
      if (mb.count(v)) ei.insert(v);
    REQUIRE(mu == eu);
    REQUIRE(mi == ei);

    for (long long x : ma)
      for (long long y : mb) eadd.insert(x + y);
    REQUIRE(members(a.add(b), -128, 128) ==
            std::set<long long>(eadd.begin(), eadd.end()));

    std::set<long long> emul;
    for (long long x : ma)
      for (long long y : mb) emul.insert(x * y);
    REQUIRE(members(a.mul(b), -400, 400) == emul);

    REQUIRE(a.subset_of(a.unioned(b)));
    REQUIRE(a.intersect(b).subset_of(a));
  }
}

TEST_CASE("unbounded spans") {
  IntSet all = IntSet::all();
  CHECK(all.contains(-1000000));
  CHECK(all.is_all());
  CHECK_FALSE(all.finite());
  CHECK_FALSE(all.enumerate(16).has_value());
  CHECK(all.add(IntSet::point(5)).is_all());
  CHECK(all.intersect(IntSet::range(std::nullopt, 2)) == IntSet::range(std::nullopt, 2));
  CHECK(IntSet::range(3, std::nullopt).intersect(IntSet::range(std::nullopt, 5)) ==
        IntSet::range(3, 5));
  CHECK(IntSet::range(std::nullopt, 2).unioned(IntSet::range(3, std::nullopt)).is_all());
  CHECK(IntSet::range(std::nullopt, 2).negate() == IntSet::range(-2, std::nullopt));
  CHECK_THROWS_AS(all.mul(IntSet::point(2)), EvalLimit);
}

TEST_CASE("collecting evaluation") {
  CMemory m = mem({{"x", vints({1, 2})}, {"y", vints({10})}, {"s", vstrs({"ab", "c"})}});

  CHECK(ev("x+y", m).ints == ints({11, 12}));
  CHECK(ev("x-1", m).ints == ints({0, 1}));
  CHECK(ev("x*x", m).ints == ints({1, 2, 4}));
  CHECK(ev("rand()", m).ints.is_all());
  CHECK(ev("len(s)", m).ints == ints({1, 2}));
  CHECK(ev("s.'d'", m).strs == StrSet{"abd", "cd"});
  CHECK(ev("ss(s,1,1)", m).strs == StrSet{"a", "c"});
  CHECK(ev("ss(s,2,1)", m).strs == StrSet{"b"});  // 'c' is too short for the window
  CHECK(ev("num(s)", m).ints.empty());            // no numerals among the strings

  CMemory m2 = mem({{"n", vstrs({"42", "-7", "zz"})}});
  CHECK(ev("num(n)", m2).ints == ints({42, -7}));

  SECTION("comparisons return possible outcomes") {
    CHECK(ev("x<y", m).bools == BoolSet::of(true));
    CHECK(ev("y<x", m).bools == BoolSet::of(false));
    CHECK(ev("x=1", m).bools == BoolSet::both());
    CHECK(ev("y=10", m).bools == BoolSet::of(true));
    CHECK(ev("x>1", m).bools == BoolSet::both());
    CHECK(ev("rand()<x", m).bools == BoolSet::both());
    // string order is strict prefix
    CMemory sm = mem({{"a", vstrs({"ab"})}, {"b", vstrs({"abc"})}});
    CHECK(ev("a<b", sm).bools == BoolSet::of(true));
    CHECK(ev("b<a", sm).bools == BoolSet::of(false));
    CHECK(ev("a<a", sm).bools == BoolSet::of(false));
    CHECK(ev("a='ab'", sm).bools == BoolSet::of(true));
  }

  SECTION("boolean connectives") {
    CMemory bm = mem({{"p", ValueSet::of_bool(BoolSet::both())},
                      {"q", ValueSet::of_bool(BoolSet::of(true))}});
    CHECK(ev("p&q", bm).bools == BoolSet::both());
    CHECK(ev("q&q", bm).bools == BoolSet::of(true));
    CHECK(ev("!q", bm).bools == BoolSet::of(false));
    CHECK(ev("!p", bm).bools == BoolSet::both());
    CHECK(ev("p&1=2", bm).bools == BoolSet::of(false));
  }

  SECTION("sort mismatches contribute nothing") {
    CHECK(ev("s+1", m).empty());   // strings under arithmetic
    CHECK(ev("x.s", m).empty());   // ints under concatenation
    CHECK(ev("x&x", m).empty());
    CHECK(ev("x='a'", m).bools.empty());
  }
}

TEST_CASE("condition filters narrow variable sets") {
  CMemory m = mem({{"x", vints({1, 2, 3, 4, 5})}, {"s", vstrs({"a", "ab", "b"})}});

  auto t = filter_condition(*parse_expr("x<3"), m, true);
  REQUIRE(t);
  CHECK((*t)["x"].ints == ints({1, 2}));
  auto f = filter_condition(*parse_expr("x<3"), m, false);
  REQUIRE(f);
  CHECK((*f)["x"].ints == ints({3, 4, 5}));

  auto eq = filter_condition(*parse_expr("x=4"), m, true);
  REQUIRE(eq);
  CHECK((*eq)["x"].ints == ints({4}));
  auto ne = filter_condition(*parse_expr("x=4"), m, false);
  REQUIRE(ne);
  CHECK((*ne)["x"].ints == ints({1, 2, 3, 5}));

  CHECK_FALSE(filter_condition(*parse_expr("x>9"), m, true).has_value());
  CHECK(filter_condition(*parse_expr("x>9"), m, false).has_value());

  auto band = filter_condition(*parse_expr("x>1&x<4"), m, true);
  REQUIRE(band);
  CHECK((*band)["x"].ints == ints({2, 3}));
  auto bor = filter_condition(*parse_expr("x>1&x<4"), m, false);  // negated conjunction
  REQUIRE(bor);
  CHECK((*bor)["x"].ints == ints({1, 4, 5}));  // join of x<=1 and x>=4

  auto sp = filter_condition(*parse_expr("s<'abc'"), m, true);
  REQUIRE(sp);
  CHECK((*sp)["s"].strs == StrSet{"a", "ab"});

  auto vv = filter_condition(*parse_expr("x<y"), mem({{"x", vints({1, 5})}, {"y", vints({3})}}),
                             true);
  REQUIRE(vv);
  CHECK((*vv)["x"].ints == ints({1}));
  CHECK((*vv)["y"].ints == ints({3}));

  auto nn = filter_condition(*parse_expr("!x<3"), m, true);
  REQUIRE(nn);
  CHECK((*nn)["x"].ints == ints({3, 4, 5}));
}

TEST_CASE("trace runner") {
  auto lp = label(parse_program("x:=1; while x<4 {x:=x+1;}; $"));
  TraceResult r = run_trace(lp, {}, kRand7);
  CHECK(r.exit.at("x") == Value::of(4LL));

  auto lp2 = label(parse_program("y:='x:=x+1;'; x:=0; reflect(y); reflect(y); $"));
  CHECK(run_trace(lp2, {}, kRand7).exit.at("x") == Value::of(2LL));

  // reflect of a non-program string is a no-op; assignment keeps the value
  auto lp3 = label(parse_program("y:='hello'; x:=reflect(y); $"));
  CHECK(run_trace(lp3, {}, kRand7).exit.at("x") == Value::of(std::string("hello")));

  auto lp4 = label(parse_program("y:='z:=9;'; x:=reflect(y); $"));
  Env e4 = run_trace(lp4, {}, kRand7).exit;
  CHECK(e4.at("x") == Value::of(std::string()));
  CHECK(e4.at("z") == Value::of(9LL));

  CHECK(run_trace(label(parse_program("x:=rand();$")), {}, kRand7).exit.at("x") ==
        Value::of(7LL));

  SECTION("failure modes") {
    CHECK_THROWS_AS(run_trace(label(parse_program("x:=y+1;$")), {}, kRand7), TraceError);
    CHECK_THROWS_AS(run_trace(label(parse_program("x:='a'+1;$")), {}, kRand7), TraceError);
    CHECK_THROWS_AS(run_trace(label(parse_program("reflect(1+2);$")), {}, kRand7), TraceError);
    // the unbounded tower
    auto tower = label(parse_program("x:='reflect(x);$'; reflect(x); $"));
    CHECK_THROWS_AS(run_trace(tower, {}, kRand7), TowerDivergence);
    TraceLimits tiny;
    tiny.max_steps = 10;
    CHECK_THROWS_AS(run_trace(label(parse_program("while 0<1 {x:=1;}; $")), {}, kRand7, tiny),
                    TraceBudget);
  }

  SECTION("steps record the executed lines") {
    TraceResult t = run_trace(label(parse_program("x:=1; x:=x+1; $")), {}, kRand7);
    REQUIRE(t.steps.size() == 3);
    CHECK(t.steps[0].line == 1);
    CHECK(t.steps[1].env.at("x") == Value::of(1LL));
    CHECK(t.steps[2].env.at("x") == Value::of(2LL));
  }
}

TEST_CASE("executable value splitting") {
  CodeSplit cs = split_executable({"x:=1;", "hello", "$", "", "skip;$"});
  REQUIRE(cs.programs.size() == 3);
  CHECK(cs.programs[0].first == "$");
  CHECK(cs.programs[1].first == "skip;$");
  CHECK(cs.programs[2].first == "x:=1;");
  REQUIRE(cs.plain.size() == 2);
  CHECK(cs.plain[0] == "");
  CHECK(cs.plain[1] == "hello");
}

TEST_CASE("iterative count golden table") {
  const std::string s_dollar = "x:=x+1;$";
  const std::string ss_dollar = "x:=x+1;x:=x+1;$";
  auto lp = label(parse_program("x:=1; str:='$'; while x<3 {str:='x:=x+1;'.str; reflect(str);}; $"));
  REQUIRE(lp.end_line == 6);

  CollectResult r = run_collecting(lp, {}, {}, kRand7);

  CHECK(r.store[1].empty());
  CHECK(same_memory(r.store[2], mem({{"x", vints({1})}})));
  CHECK(same_memory(r.store[3],
                    mem({{"x", vints({1, 2, 3, 4})}, {"str", vstrs({"$", s_dollar, ss_dollar})}})));
  CHECK(same_memory(r.store[4], mem({{"x", vints({1, 2})}, {"str", vstrs({"$", s_dollar})}})));
  CHECK(same_memory(r.store[5],
                    mem({{"x", vints({1, 2})}, {"str", vstrs({s_dollar, ss_dollar})}})));
  CHECK(same_memory(r.store[6],
                    mem({{"x", vints({3, 4})}, {"str", vstrs({"$", s_dollar, ss_dollar})}})));

  CHECK(r.exit_env.at("x") == Value::of(4LL));
  CHECK(r.exit_env.at("str") == Value::of(ss_dollar));

  // Three reflected executions: the first iteration runs one program, the
  // second runs two (the bare terminator never parses as a new program here
  // because '$' is only executable alone, and 'x:=x+1;$' etc. are).
  REQUIRE(r.reflect_runs.size() == 3);
  CHECK(r.reflect_runs[0].word == s_dollar);
  CHECK(r.reflect_runs[0].site_line == 5);
  CHECK(r.reflect_runs[1].word == s_dollar);
  CHECK(r.reflect_runs[2].word == ss_dollar);

  // The second iteration's single-increment run seen in the walkthrough.
  const CStore& sub = r.reflect_runs[1].store;
  CHECK(same_memory(sub.at(1),
                    mem({{"x", vints({1, 2})}, {"str", vstrs({s_dollar, ss_dollar})}})));
  CHECK(same_memory(sub.at(2),
                    mem({{"x", vints({2, 3})}, {"str", vstrs({s_dollar, ss_dollar})}})));
}

TEST_CASE("assigned reflection collecting") {
  // Mixed executable and plain values reach the successor both ways.
  auto lp = label(parse_program("x:=reflect(y); $"));
  CMemory init = mem({{"y", vstrs({"z:=5;", "plain"})}, {"x", vstrs({"old"})}});
  Env env = {{"y", Value::of(std::string("plain"))}};
  CollectResult r = run_collecting(lp, env, init, kRand7);

  const CMemory& out = r.store[2];
  // plain half: x gets the non-executable string
  CHECK(out.at("x").strs.count("plain") == 1);
  // seeded half: x gets the empty string before the program runs
  CHECK(out.at("x").strs.count("") == 1);
  // the reflected program's effect arrives through the exit join
  CHECK(out.at("z").ints == ints({5}));
  // sub-run starts from the site memory, so the old x is still visible there
  CHECK(out.at("x").strs.count("old") == 1);

  CHECK(r.exit_env.at("x") == Value::of(std::string("plain")));
}

TEST_CASE("collecting tower and budget guards") {
  auto tower = label(parse_program("x:='reflect(x);$'; reflect(x); $"));
  CHECK_THROWS_AS(run_collecting(tower, {}, {}, kRand7), TowerDivergence);
}
