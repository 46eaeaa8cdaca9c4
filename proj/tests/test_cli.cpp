// End-to-end checks of the sea binary: modes, exit codes, report shape,
// artifact emission, and byte stability of --no-timing reports.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <catch2/catch_amalgamated.hpp>
#include <json.hpp>

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

struct TempDir {
  fs::path p;
  TempDir() {
    static int n = 0;
    p = fs::temp_directory_path() /
        ("sea_cli_" + std::to_string(::getpid()) + "_" + std::to_string(n++));
    fs::create_directories(p);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(p, ec);
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& body) {
  std::ofstream out(p, std::ios::binary);
  out << body;
}

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

RunResult run_cli(const TempDir& d, const std::string& args) {
  fs::path of = d.p / "out.txt", ef = d.p / "err.txt";
  std::string cmd =
      std::string(SEA_CLI_PATH) + " " + args + " > " + of.string() + " 2> " + ef.string();
  int st = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  r.out = slurp(of);
  r.err = slurp(ef);
  return r;
}

const char* kGolden = "x:=1; str:='$'; while x<3 {str:='x:=x+1;'.str; reflect(str);}; $";

}  // namespace

TEST_CASE("cli analyze reports store, site, and synthesized program") {
  TempDir d;
  spit(d.p / "g.sea", kGolden);
  auto r = run_cli(d, "analyze " + (d.p / "g.sea").string() + " --no-timing");
  REQUIRE(r.code == 0);
  Json j = Json::parse(r.out);
  CHECK(j["mode"] == "analyze");
  CHECK(j["program"]["lines"].size() == 6);
  CHECK(j["warnings"].empty());
  CHECK(j["exit"]["x"]["kind"] == "int");
  CHECK(j["exit"]["x"]["lo"] == 3);
  REQUIRE(j["sites"].size() == 1);
  const Json& s = j["sites"][0];
  CHECK(s["line"] == 5);
  CHECK(s["depth"] == 0);
  CHECK_FALSE(s["cutoff"].get<bool>());
  CHECK_FALSE(s["havoc"].get<bool>());
  CHECK(s["regex"] == "x:=x+1;(x:=x+1;)*$");
  std::string prog = s["program"].get<std::string>();
  CHECK(prog.find("x:=x+1;") != std::string::npos);
  CHECK(prog.find("rand()") != std::string::npos);
}

TEST_CASE("cli concrete matches the collecting oracle") {
  TempDir d;
  spit(d.p / "g.sea", kGolden);
  auto r = run_cli(d, "concrete " + (d.p / "g.sea").string() + " --no-timing");
  REQUIRE(r.code == 0);
  Json j = Json::parse(r.out);
  CHECK(j["store"]["3"]["x"]["ints"] == Json::parse("[[1,4]]"));
  CHECK(j["store"]["3"]["str"]["strs"] ==
        Json::parse(R"(["$","x:=x+1;$","x:=x+1;x:=x+1;$"])"));
  CHECK(j["store"]["6"]["x"]["ints"] == Json::parse("[[3,4]]"));
  CHECK(j["exit"]["x"] == 4);
  CHECK(j["exit"]["str"] == "x:=x+1;x:=x+1;$");
  CHECK(j["reflect_runs"].size() == 3);
  CHECK(j["reflect_runs"][2]["word"] == "x:=x+1;x:=x+1;$");
}

TEST_CASE("cli diff covers the oracle on reflective programs") {
  TempDir d;
  spit(d.p / "g.sea", kGolden);
  auto r = run_cli(d, "diff " + (d.p / "g.sea").string() + " --no-timing");
  REQUIRE(r.code == 0);
  Json j = Json::parse(r.out);
  REQUIRE(j.contains("diff"));
  CHECK_FALSE(j["diff"]["violation"].get<bool>());
  CHECK(j["diff"]["verdicts"].size() > 0);
  for (const Json& v : j["diff"]["verdicts"]) CHECK(v["covered"].get<bool>());
}

TEST_CASE("cli exit codes distinguish parse, usage, and io failures") {
  TempDir d;
  spit(d.p / "bad.sea", "x:=;");
  spit(d.p / "ok.sea", "x:=1; $");
  std::string ok = (d.p / "ok.sea").string();
  CHECK(run_cli(d, "analyze " + (d.p / "bad.sea").string()).code == 1);
  CHECK(run_cli(d, "analyze " + (d.p / "missing.sea").string()).code == 2);
  CHECK(run_cli(d, "frobnicate " + ok).code == 2);
  CHECK(run_cli(d, "analyze " + ok + " --tower-threshold 0").code == 2);
  CHECK(run_cli(d, "analyze " + ok + " --widen-n 0").code == 2);
  CHECK(run_cli(d, "analyze " + ok + " --input x").code == 2);
  CHECK(run_cli(d, "analyze " + ok + " --input x=oops").code == 2);
  CHECK(run_cli(d, "analyze " + ok + " --input 1x=3").code == 2);
  CHECK(run_cli(d, "concrete " + ok + " --input x=top").code == 2);
  CHECK(run_cli(d, "concrete " + ok + " --input x=[0,inf]").code == 2);
  CHECK(run_cli(d, "concrete " + ok + " --input x=sigma*").code == 2);
  CHECK(run_cli(d, "diff " + ok + " --input x=top").code == 2);
  // Synthesis guard names are reserved; source files must not use them.
  spit(d.p / "guard.sea", "g1:=1; $");
  CHECK(run_cli(d, "analyze " + (d.p / "guard.sea").string()).code == 1);
}

TEST_CASE("cli reports are byte stable without timing") {
  TempDir d;
  spit(d.p / "r.sea", "x:=rand(); y:=rand(); if x<y {z:=x;}; $");
  std::string base = "diff " + (d.p / "r.sea").string() + " --seed 7 --no-timing";
  auto r1 = run_cli(d, base);
  auto r2 = run_cli(d, base);
  REQUIRE(r1.code == 0);
  CHECK(r1.out == r2.out);
  CHECK_FALSE(r1.out.empty());
  auto rj1 = run_cli(d, base + " --json " + (d.p / "a.json").string());
  auto rj2 = run_cli(d, base + " --json " + (d.p / "b.json").string());
  REQUIRE(rj1.code == 0);
  REQUIRE(rj2.code == 0);
  CHECK(slurp(d.p / "a.json") == slurp(d.p / "b.json"));
  CHECK(slurp(d.p / "a.json") == r1.out);
  // With timing on, the report still parses and carries the timing field.
  auto rt = run_cli(d, "analyze " + (d.p / "r.sea").string());
  CHECK(Json::parse(rt.out).contains("timing_ms"));
}

TEST_CASE("cli emits per-site automata and program artifacts") {
  TempDir d;
  spit(d.p / "g.sea", kGolden);
  fs::path dots = d.p / "dots";
  auto r = run_cli(d, "analyze " + (d.p / "g.sea").string() + " --emit-dot " + dots.string() +
                          " --no-timing");
  REQUIRE(r.code == 0);
  Json j = Json::parse(r.out);
  std::set<std::string> want = {"site5_input.dot", "site5_stmsyn.dot", "site5_exec.dot",
                                "site5_regex.txt", "site5_program.sea"};
  std::set<std::string> got(j["artifacts"].begin(), j["artifacts"].end());
  CHECK(got == want);
  for (const auto& name : want) {
    CHECK(fs::exists(dots / name));
    CHECK(fs::file_size(dots / name) > 0);
  }
  std::string regex = slurp(dots / "site5_regex.txt");
  CHECK(regex == "x:=x+1;(x:=x+1;)*$\n");
  std::string dot = slurp(dots / "site5_input.dot");
  CHECK(dot.find("digraph") != std::string::npos);

  // A reflect-free program has no sites and so no artifacts.
  spit(d.p / "p.sea", "x:=1; $");
  fs::path none = d.p / "none";
  auto r2 = run_cli(d, "analyze " + (d.p / "p.sea").string() + " --emit-dot " + none.string() +
                           " --no-timing");
  REQUIRE(r2.code == 0);
  CHECK(Json::parse(r2.out)["artifacts"].empty());

  // Nested reflection prefixes artifact names with the outer site path.
  spit(d.p / "t.sea", "x:='reflect(x);'; reflect(x); $");
  fs::path nest = d.p / "nest";
  auto r3 = run_cli(d, "analyze " + (d.p / "t.sea").string() + " --tower-threshold 2 --emit-dot " +
                           nest.string() + " --no-timing");
  REQUIRE(r3.code == 0);
  Json j3 = Json::parse(r3.out);
  std::set<std::string> got3(j3["artifacts"].begin(), j3["artifacts"].end());
  CHECK(got3.count("site2_input.dot") == 1);
  CHECK(got3.count("site2_1_input.dot") == 1);
}

TEST_CASE("cli input bindings shape both semantics") {
  TempDir d;
  spit(d.p / "p.sea", "y:=x+1; $");
  std::string f = (d.p / "p.sea").string();
  auto r = run_cli(d, "analyze " + f + " --input x=[0,9] --no-timing");
  REQUIRE(r.code == 0);
  Json j = Json::parse(r.out);
  CHECK(j["exit"]["y"] == Json::parse(R"({"kind":"int","lo":1,"hi":10})"));
  CHECK(j["config"]["inputs"]["x"] == "[0,9]");

  auto rc = run_cli(d, "concrete " + f + " --input x=[0,9] --no-timing");
  REQUIRE(rc.code == 0);
  Json jc = Json::parse(rc.out);
  CHECK(jc["exit"]["x"] == 0);
  CHECK(jc["exit"]["y"] == 1);
  CHECK(jc["store"]["2"]["y"]["ints"] == Json::parse("[[1,10]]"));

  auto rd = run_cli(d, "diff " + f + " --input x=[0,9] --input s={ab,cd} --no-timing");
  REQUIRE(rd.code == 0);
  CHECK_FALSE(Json::parse(rd.out)["diff"]["violation"].get<bool>());

  // String set inputs drive string operators on both sides.
  spit(d.p / "q.sea", "t:=s.s; $");
  auto rs = run_cli(d, "diff " + (d.p / "q.sea").string() + " --input s={a,b} --no-timing");
  REQUIRE(rs.code == 0);
  Json js = Json::parse(rs.out);
  CHECK_FALSE(js["diff"]["violation"].get<bool>());
  CHECK(js["diff"]["concrete"]["store"]["2"]["t"]["strs"] ==
        Json::parse(R"(["aa","ab","ba","bb"])"));
}

TEST_CASE("cli diff flags an oracle run outside the abstract inputs") {
  TempDir d;
  spit(d.p / "v.sea", "y:=x; $");
  std::string f = (d.p / "v.sea").string();
  auto r = run_cli(d, "diff " + f + " --input x=[0,5] --concrete-input x=100 --no-timing");
  REQUIRE(r.code == 3);
  Json j = Json::parse(r.out);
  CHECK(j["diff"]["violation"].get<bool>());
  bool saw_y = false;
  for (const Json& v : j["diff"]["verdicts"])
    if (v["var"] == "y" && !v["covered"].get<bool>()) saw_y = true;
  CHECK(saw_y);
  // The override only applies to the oracle; inside the inputs it is benign.
  auto ok = run_cli(d, "diff " + f + " --input x=[0,5] --concrete-input x=3 --no-timing");
  CHECK(ok.code == 0);
  CHECK(run_cli(d, "analyze " + f + " --concrete-input x=1").code == 2);
}

TEST_CASE("cli concrete records a trace error as an outcome") {
  TempDir d;
  spit(d.p / "loop.sea", "x:=0; while x<1 {y:=x;}; $");
  auto r = run_cli(d, "concrete " + (d.p / "loop.sea").string() + " --max-trace-len 50 --no-timing");
  REQUIRE(r.code == 0);
  Json j = Json::parse(r.out);
  REQUIRE(j.contains("trace_error"));
  CHECK_FALSE(j["trace_error"].get<std::string>().empty());
  CHECK_FALSE(j.contains("store"));

  auto rd = run_cli(d, "diff " + (d.p / "loop.sea").string() + " --max-trace-len 50 --no-timing");
  REQUIRE(rd.code == 0);
  Json jd = Json::parse(rd.out);
  CHECK(jd["diff"].contains("trace_error"));
  CHECK_FALSE(jd["diff"]["violation"].get<bool>());
}
