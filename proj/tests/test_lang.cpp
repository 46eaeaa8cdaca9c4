#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "sea/ast.hpp"
#include "sea/parser.hpp"

using namespace sea;

namespace {

Program parse(const std::string& s) { return parse_program(s); }

std::string reprint(const std::string& s) { return print_inline(parse(s)); }

}  // namespace

TEST_CASE("statements parse and print back") {
  CHECK(reprint("skip;$") == "skip;$");
  CHECK(reprint("x:=1;$") == "x:=1;$");
  CHECK(reprint("x := 1 ;$") == "x:=1;$");
  CHECK(reprint("y:='';$") == "y:='';$");
  CHECK(reprint("y:='x:=x+1;';$") == "y:='x:=x+1;';$");
  CHECK(reprint("reflect(y);$") == "reflect(y);$");
  CHECK(reprint("x:=reflect(y);$") == "x:=reflect(y);$");
  CHECK(reprint("if x<3 {skip;};$") == "if x<3 {skip;};$");
  CHECK(reprint("while x<3 {x:=x+1;};$") == "while x<3 {x:=x+1;};$");
  CHECK(reprint("$") == "$");
  CHECK(parse("$").empty());
}

TEST_CASE("expression grammar and precedence") {
  CHECK(reprint("x:=1+2*3;$") == "x:=1+2*3;$");
  auto p = parse("x:=1+2*3;$");
  const Expr& e = *p[0].expr;
  REQUIRE(e.kind == Expr::Kind::Binop);
  CHECK(e.op == '+');
  CHECK(e.b->op == '*');

  // Left association of additive operators.
  auto q = parse("x:=1-2-3;$");
  CHECK(q[0].expr->op == '-');
  CHECK(q[0].expr->a->op == '-');

  // Negation binds tighter than &, looser than comparison.
  auto r = parse("x:=!a=1&b;$");
  const Expr& re = *r[0].expr;
  REQUIRE(re.op == '&');
  REQUIRE(re.a->kind == Expr::Kind::Not);
  CHECK(re.a->a->op == '=');

  auto s = parse("y:='a'.'b'.'c';$");
  CHECK(s[0].expr->op == '.');
  CHECK(s[0].expr->a->op == '.');

  CHECK(reprint("x:=len(y)+num(z)*2;$") == "x:=len(y)+num(z)*2;$");
  CHECK(reprint("y:=ss(z,2,3);$") == "y:=ss(z,2,3);$");
  CHECK(reprint("x:=rand();$") == "x:=rand();$");
  CHECK(reprint("b:=x<3&y>0;$") == "b:=x<3&y>0;$");
  CHECK(reprint("b:='ab'<'abc';$") == "b:='ab'<'abc';$");

  // The middle dot is an accepted spelling of concatenation.
  CHECK(reprint("y:=y\xC2\xB7'a';$") == "y:=y.'a';$");
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(parse("x=1;$"), ParseError);
  CHECK_THROWS_AS(parse("x : = 1;$"), ParseError);
  CHECK_THROWS_AS(parse("skip$"), ParseError);
  CHECK_THROWS_AS(parse("x:=1;"), ParseError);  // missing terminator
  CHECK_THROWS_AS(parse("if x<3 {};$"), ParseError);
  CHECK_THROWS_AS(parse("while {skip;};$"), ParseError);
  CHECK_THROWS_AS(parse("x:='abc;$"), ParseError);
  CHECK_THROWS_AS(parse("skip:=1;$"), ParseError);
  CHECK_THROWS_AS(parse("x:=1;$ x:=2;$"), ParseError);
  CHECK_THROWS_AS(parse("x:=y\n+;$"), ParseError);

  try {
    parse("x:=1;\nzz==;$");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
    CHECK(e.col >= 3);
  }

  ParseOptions strict;
  strict.reject_guard_vars = true;
  CHECK_THROWS_AS(parse_program("g1:=rand();$", strict), ParseError);
  CHECK_NOTHROW(parse_program("g1:=rand();$"));
  CHECK_NOTHROW(parse_program("guard:=1;$", strict));  // not of the g<digits> shape
  CHECK_NOTHROW(parse_program("g:=1;$", strict));
}

TEST_CASE("code values") {
  CHECK(is_executable("x:=x+1;"));
  CHECK(is_executable("x:=x+1;$"));
  CHECK(is_executable("$"));
  CHECK(is_executable(" skip; "));
  CHECK(is_executable("if x<3 {x:=x+1;};"));
  CHECK_FALSE(is_executable(""));
  CHECK_FALSE(is_executable("   "));
  CHECK_FALSE(is_executable("hello"));
  CHECK_FALSE(is_executable("x=x+1;"));
  CHECK_FALSE(is_executable("x:=x+1"));  // unterminated statement
  CHECK_FALSE(is_executable(";;;"));
  CHECK_FALSE(is_executable("x:=x+1;;"));
  CHECK_FALSE(is_executable("wBhilAeBx;"));

  auto p = parse_code_value("x:=x+1;");
  REQUIRE(p.has_value());
  CHECK(p->size() == 1);
  CHECK(parse_code_value("$")->empty());
}

TEST_CASE("statement units") {
  CHECK(classify_unit("x:=x+1", ';') == UnitKind::Simple);
  CHECK(classify_unit("skip", ';') == UnitKind::Simple);
  CHECK(classify_unit("reflect(y)", ';') == UnitKind::Simple);
  CHECK(classify_unit("x:=reflect(y)", ';') == UnitKind::Simple);
  CHECK(classify_unit("", ';') == UnitKind::Empty);
  CHECK(classify_unit("if x<3", '{') == UnitKind::OpenIf);
  CHECK(classify_unit("while x<3", '{') == UnitKind::OpenWhile);
  CHECK(classify_unit("", '}') == UnitKind::Close);
  CHECK(classify_unit("", '$') == UnitKind::Terminator);

  CHECK_FALSE(classify_unit("hello", ';').has_value());
  CHECK_FALSE(classify_unit("if x<3", ';').has_value());
  CHECK_FALSE(classify_unit("x:=x+1", '{').has_value());
  CHECK_FALSE(classify_unit("x", '}').has_value());
  CHECK_FALSE(classify_unit("x", '$').has_value());
  CHECK_FALSE(classify_unit("wBhilAeBx", ';').has_value());
}

TEST_CASE("labeling assigns lines in source order") {
  auto lp = label(parse("x:=1; y:=''; while x<3 {y:=y.'x:=x+1;'; x:=x+1;}; $"));
  REQUIRE(lp.end_line == 6);
  REQUIRE(lp.lines.size() >= 7);
  CHECK(lp.lines[1].kind == Line::Kind::Assign);
  CHECK(lp.lines[1].next == 2);
  CHECK(lp.lines[2].kind == Line::Kind::Assign);
  CHECK(lp.lines[2].next == 3);
  CHECK(lp.lines[3].kind == Line::Kind::While);
  CHECK(lp.lines[3].tsucc == 4);
  CHECK(lp.lines[3].fsucc == 6);
  CHECK(lp.lines[3].text == "while x<3 {");
  CHECK(lp.lines[4].kind == Line::Kind::Assign);
  CHECK(lp.lines[4].next == 5);
  CHECK(lp.lines[5].kind == Line::Kind::Assign);
  CHECK(lp.lines[5].next == 3);  // loop body returns to the header
  CHECK(lp.lines[6].kind == Line::Kind::End);

  auto nested = label(parse("if a=1 {if b=1 {skip;}; x:=1;}; y:=2; $"));
  // 1: outer if, 2: inner if, 3: skip, 4: x:=1, 5: y:=2, 6: end
  CHECK(nested.end_line == 6);
  CHECK(nested.lines[1].tsucc == 2);
  CHECK(nested.lines[1].fsucc == 5);
  CHECK(nested.lines[2].tsucc == 3);
  CHECK(nested.lines[2].fsucc == 4);
  CHECK(nested.lines[3].next == 4);
  CHECK(nested.lines[4].next == 5);
  CHECK(nested.lines[5].next == 6);

  auto empty = label(parse("$"));
  CHECK(empty.end_line == 1);
  CHECK(empty.lines[1].kind == Line::Kind::End);
}

TEST_CASE("listings") {
  auto p = parse("x:=x+1;g1:=rand();while g1=1 {x:=x+1;g1:=rand();};$");
  std::string listing = pretty_print(p);
  CHECK(listing ==
        "x:=x+1;\n"
        "g1:=rand();\n"
        "while g1=1 {\n"
        "  x:=x+1;\n"
        "  g1:=rand();\n"
        "};\n"
        "$\n");
  CHECK(equal_program(parse(print_inline(p)), p));
}
