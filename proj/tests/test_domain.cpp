// Lattice laws, widening, and concretization for the abstract value domain.

#include <optional>
#include <random>

#include "helpers.hpp"
#include "sea/domain.hpp"

using namespace sea;

namespace {

std::vector<Sym> ab() { return {Sym('a'), Sym('b')}; }

AbstVal rand_val(std::mt19937& rng) {
  switch (rng() % 8) {
    case 0:
      return AbstVal::bot();
    case 1:
      return AbstVal::top();
    case 2:
    case 3: {
      long long lo = static_cast<long long>(rng() % 21) - 10;
      long long hi = lo + static_cast<long long>(rng() % 11);
      std::optional<long long> l = lo, h = hi;
      if (rng() % 4 == 0) l = std::nullopt;
      if (rng() % 4 == 0) h = std::nullopt;
      return AbstVal::interval(l, h);
    }
    case 4:
      return AbstVal::bools(rng() % 2 == 0, rng() % 2 == 0);
    case 5:
      return AbstVal::of_bool(rng() % 2 == 0);
    default:
      return AbstVal::strings(sea::test::random_nfa(rng, 4, ab()));
  }
}

Value rand_concrete(std::mt19937& rng) {
  switch (rng() % 3) {
    case 0:
      return Value::of(static_cast<long long>(rng() % 31) - 15);
    case 1:
      return Value::of(rng() % 2 == 0);
    default:
      return Value::of(sea::test::random_word(rng, "ab", 4));
  }
}

}  // namespace

TEST_CASE("partial order and bounds") {
  std::mt19937 rng(911);
  for (int it = 0; it < 400; ++it) {
    AbstVal a = rand_val(rng), b = rand_val(rng), c = rand_val(rng);
    CHECK(leq(a, a));
    CHECK(leq(AbstVal::bot(), a));
    CHECK(leq(a, AbstVal::top()));
    if (leq(a, b) && leq(b, a)) CHECK(a == b);
    if (leq(a, b) && leq(b, c)) CHECK(leq(a, c));

    AbstVal j = lub(a, b);
    CHECK(leq(a, j));
    CHECK(leq(b, j));
    CHECK(j == lub(b, a));
    if (leq(a, b)) CHECK(j == b);

    AbstVal m = glb(a, b);
    CHECK(leq(m, a));
    CHECK(leq(m, b));
    CHECK(m == glb(b, a));
    if (leq(a, b)) CHECK(m == a);

    CHECK(lub(lub(a, b), c) == lub(a, lub(b, c)));

    AbstVal w = widen_val(a, b, 3);
    CHECK(leq(j, w));
  }
}

TEST_CASE("values of different sorts only meet at the extremes") {
  AbstVal i = AbstVal::interval(0, 5);
  AbstVal s = AbstVal::of_str("ab");
  AbstVal b = AbstVal::of_bool(true);
  CHECK(lub(i, s).is_top());
  CHECK(lub(s, b).is_top());
  CHECK(glb(i, s).is_bot());
  CHECK(glb(b, i).is_bot());
  CHECK_FALSE(leq(i, s));
  CHECK_FALSE(leq(s, i));
}

TEST_CASE("degenerate payloads normalize to bottom") {
  CHECK(AbstVal::interval(3, 2).is_bot());
  CHECK(AbstVal::bools(false, false).is_bot());
  CHECK(AbstVal::strings(Fa::empty_language()).is_bot());
}

TEST_CASE("interval widening jumps to thresholds, then infinity") {
  std::vector<long long> th{-100, -10, 10, 100};
  AbstVal a = AbstVal::interval(0, 5);

  AbstVal w1 = widen_val(a, AbstVal::interval(0, 6), 3, th);
  CHECK(w1 == AbstVal::interval(0, 10));
  AbstVal w2 = widen_val(w1, AbstVal::interval(0, 11), 3, th);
  CHECK(w2 == AbstVal::interval(0, 100));
  AbstVal w3 = widen_val(w2, AbstVal::interval(0, 101), 3, th);
  CHECK(w3 == AbstVal::interval(0, std::nullopt));

  AbstVal lo1 = widen_val(a, AbstVal::interval(-1, 5), 3, th);
  CHECK(lo1 == AbstVal::interval(-10, 5));
  AbstVal lo2 = widen_val(lo1, AbstVal::interval(-11, 5), 3, th);
  CHECK(lo2 == AbstVal::interval(-100, 5));
  AbstVal lo3 = widen_val(lo2, AbstVal::interval(-101, 5), 3, th);
  CHECK(lo3 == AbstVal::interval(std::nullopt, 5));

  // Without thresholds a single growth step reaches infinity.
  CHECK(widen_val(a, AbstVal::interval(0, 6), 3) == AbstVal::interval(0, std::nullopt));
  CHECK(widen_val(a, AbstVal::interval(-1, 5), 3) == AbstVal::interval(std::nullopt, 5));
  // A stable side stays put.
  CHECK(widen_val(a, AbstVal::interval(2, 5), 3) == AbstVal::interval(0, 5));
}

TEST_CASE("widening chains stabilize") {
  std::mt19937 rng(912);
  for (int chain = 0; chain < 60; ++chain) {
    // Feed an increasing input chain; the widened iterate must go quiet
    // (five consecutive silent steps) well before the step cap.
    AbstVal y = rand_val(rng);
    AbstVal x = y;
    int quiet = 0, steps = 0;
    while (quiet < 5 && steps < 50) {
      ++steps;
      y = lub(y, rand_val(rng));
      AbstVal next = leq(y, x) ? x : widen_val(x, y, 3);
      if (next == x) {
        ++quiet;
      } else {
        quiet = 0;
        x = next;
      }
    }
    CHECK(quiet == 5);
    CHECK(leq(y, x));  // the iterate really is an upper bound of the chain
  }
}

TEST_CASE("string widening folds growing languages") {
  AbstVal a = AbstVal::of_str("");
  AbstVal b = lub(a, AbstVal::of_str("x:=x+1;"));
  AbstVal w = widen_val(a, b, 3);
  CHECK(w == b);  // first growth step below the merge horizon stays exact
  AbstVal c = lub(b, AbstVal::of_str("x:=x+1;x:=x+1;"));
  AbstVal w2 = widen_val(b, c, 3);
  CHECK(w2 == AbstVal::strings(fa_star(fa_word_str("x:=x+1;"))));
}

TEST_CASE("concretization membership") {
  AbstVal iv = AbstVal::interval(0, 5);
  CHECK(gamma_contains(iv, Value::of(3LL)));
  CHECK_FALSE(gamma_contains(iv, Value::of(6LL)));
  CHECK_FALSE(gamma_contains(iv, Value::of(true)));
  CHECK_FALSE(gamma_contains(iv, Value::of(std::string("3"))));

  AbstVal half = AbstVal::interval(std::nullopt, 0);
  CHECK(gamma_contains(half, Value::of(-1000000LL)));
  CHECK_FALSE(gamma_contains(half, Value::of(1LL)));

  AbstVal st = AbstVal::strings(fa_star(fa_word_str("ab")));
  CHECK(gamma_contains(st, Value::of(std::string(""))));
  CHECK(gamma_contains(st, Value::of(std::string("abab"))));
  CHECK_FALSE(gamma_contains(st, Value::of(std::string("aba"))));

  CHECK(gamma_contains(AbstVal::top(), Value::of(std::string("anything"))));
  CHECK_FALSE(gamma_contains(AbstVal::bot(), Value::of(0LL)));
}

TEST_CASE("order implies concretization containment") {
  std::mt19937 rng(913);
  for (int it = 0; it < 600; ++it) {
    AbstVal a = rand_val(rng), b = rand_val(rng);
    if (!leq(a, b)) continue;
    Value c = rand_concrete(rng);
    if (gamma_contains(a, c)) CHECK(gamma_contains(b, c));
  }
}

TEST_CASE("covering whole collecting value sets") {
  ValueSet empty;
  CHECK(gamma_covers(AbstVal::bot(), empty));
  CHECK(gamma_covers(AbstVal::top(), empty));

  ValueSet ints = ValueSet::of_int(IntSet::of({1, 2, 5}));
  CHECK(gamma_covers(AbstVal::interval(0, 5), ints));
  CHECK_FALSE(gamma_covers(AbstVal::interval(0, 4), ints));
  CHECK_FALSE(gamma_covers(AbstVal::of_str("x"), ints));
  CHECK(gamma_covers(AbstVal::top(), ints));

  ValueSet below = ValueSet::of_int(IntSet::range(std::nullopt, 3));
  CHECK(gamma_covers(AbstVal::interval(std::nullopt, 3), below));
  CHECK_FALSE(gamma_covers(AbstVal::interval(std::nullopt, 2), below));
  CHECK_FALSE(gamma_covers(AbstVal::interval(-1000000, 3), below));

  ValueSet strs;
  strs.strs = {"", "ab"};
  CHECK(gamma_covers(AbstVal::strings(fa_star(fa_word_str("ab"))), strs));
  CHECK_FALSE(gamma_covers(AbstVal::of_str("ab"), strs));

  ValueSet mixed = ValueSet::of_int(IntSet::point(1));
  mixed.strs = {"x"};
  CHECK(gamma_covers(AbstVal::top(), mixed));
  CHECK_FALSE(gamma_covers(AbstVal::interval(0, 2), mixed));
  CHECK_FALSE(gamma_covers(AbstVal::of_str("x"), mixed));

  ValueSet bools;
  bools.bools = BoolSet::of(true);
  CHECK(gamma_covers(AbstVal::of_bool(true), bools));
  CHECK_FALSE(gamma_covers(AbstVal::of_bool(false), bools));
}

TEST_CASE("memories join, widen, and compare pointwise") {
  AbstMemory m1{{"x", AbstVal::interval(0, 1)}};
  AbstMemory m2{{"x", AbstVal::interval(1, 3)}, {"y", AbstVal::of_bool(true)}};
  CHECK(memory_leq(m1, memory_lub(m1, m2)));
  CHECK(memory_leq(m2, memory_lub(m1, m2)));
  CHECK(lookup(memory_lub(m1, m2), "x") == AbstVal::interval(0, 3));
  CHECK(lookup(memory_lub(m1, m2), "y") == AbstVal::of_bool(true));
  CHECK(lookup(m1, "absent").is_bot());
  CHECK(memory_leq(AbstMemory{}, m1));
  CHECK_FALSE(memory_leq(m2, m1));

  AbstMemory w = memory_widen(m1, m2, 3);
  CHECK(lookup(w, "x") == AbstVal::interval(0, std::nullopt));
  CHECK(lookup(w, "y") == AbstVal::of_bool(true));
  // Values that did not grow stay exact through a widen step.
  AbstMemory same = memory_widen(m2, m2, 3);
  CHECK(lookup(same, "x") == AbstVal::interval(1, 3));
}

TEST_CASE("display forms") {
  CHECK(abst_str(AbstVal::top()) == "top");
  CHECK(abst_str(AbstVal::interval(0, std::nullopt)) == "[0,+inf]");
  CHECK(abst_str(AbstVal::of_bool(false)) == "{false}");
  CHECK(abst_str(AbstVal::of_str("ab")) == "{'ab'}");
}
