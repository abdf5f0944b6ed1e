#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mpeccq/cli.hpp"
#include "mpeccq/polyhedra.hpp"

using namespace mpeccq;
using nlohmann::json;

namespace {
const std::string kDir = MPECCQ_PROBLEMS_DIR;

struct Run {
  int code;
  std::string out, err;
  json doc() const { return json::parse(out); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

Vec parse_vec(const json& a) {
  Vec v;
  for (const auto& s : a) v.push_back(parse_rational(s.get<std::string>()));
  return v;
}

Matrix parse_rows(const json& a, std::size_t cols) {
  std::vector<Vec> rows;
  for (const auto& r : a) rows.push_back(parse_vec(r));
  return Matrix::from_rows(rows, cols);
}

Polyhedron parse_polyhedron(const json& j) {
  std::size_t d = j["dim"];
  return Polyhedron(parse_rows(j["ineq"], d), parse_vec(j["ineq_rhs"]), parse_rows(j["eq"], d),
                    parse_vec(j["eq_rhs"]));
}

Vec v(std::initializer_list<Rational> xs) { return Vec(xs); }
}  // namespace

TEST_CASE("analyze reproduces the multiplier set") {
  auto r = run({"analyze", kDir + "/ex41.toml", "--json"});
  REQUIRE(r.code == 0);
  auto j = r.doc();
  CHECK(j["status"] == "OK");
  const auto& lam = j["result"]["multiplier_set"];
  CHECK(lam["eq"] == json::parse(R"([["1","1"]])"));
  CHECK(lam["eq_rhs"] == json::parse(R"(["1"])"));
  CHECK(j["result"]["extreme_points"] == json::parse(R"([["0","1"],["1","0"]])"));
  CHECK(j["result"]["uniqueness"]["unique"] == false);
  CHECK(j["config"]["depth"] == 12);
  CHECK(j["config"]["budget"] == 200);
  CHECK(j["config"]["seed"] == 0);
}

TEST_CASE("certify-mscq on the worked example") {
  auto r = run({"certify-mscq", kDir + "/ex41.toml", "--json"});
  REQUIRE(r.code == 0);
  auto j = r.doc();
  CHECK(j["status"] == "HOLDS");
  const auto& pre = j["result"]["prerequisites"];
  REQUIRE(pre.size() == 3);
  CHECK(pre[0]["method"] == "NNAMCQ");
  CHECK(pre[1]["method"] == "LINEAR");
  for (const auto& p : pre) CHECK(p["status"] == "HOLDS");
  for (const auto& e : j["result"]["detail"]["phase_one"]) CHECK(e["sign"] == "POSITIVE");
  for (int t = 1; t <= 8; ++t) {
    auto again = run({"certify-mscq", kDir + "/ex41.toml", "--json", "--threads", std::to_string(t)}).doc();
    CHECK(again["config"]["threads"] == t);
    CHECK(again["result"] == j["result"]);
  }
  auto m = run({"certify-mscq", kDir + "/ex41_modified.toml", "--json"});
  CHECK(m.code == 1);
  CHECK(m.doc()["result"]["scope"] == "sufficient condition");
}

TEST_CASE("diagnose-mpcc on the worked example") {
  auto r = run({"diagnose-mpcc", kDir + "/ex41.toml", "--lambda", "1/2,1/2", "--json"});
  REQUIRE(r.code == 1);
  auto j = r.doc();
  const auto& res = j["result"];
  REQUIRE(res["mpcc_mfcq"]["branches"].size() == 1);
  CHECK(res["mpcc_mfcq"]["branches"][0]["verdict"]["status"] == "FAILS");
  CHECK(res["mpcc_licq"]["status"] == "FAILS");
  CHECK(res["stationarity"]["weak"]["feasible"] == true);
  REQUIRE(res["linearized_cone"]["pieces"].size() == 1);
  Polyhedron piece = parse_polyhedron(res["linearized_cone"]["pieces"][0]);
  const Rational h = Rational(3) / 2;
  std::vector<Vec> eq{v({-1, 0, h, 0, 0, 0, 0}), v({0, -1, 0, h, 0, 0, 0}), v({0, 0, 0, 0, 0, 1, 1}),
                      v({0, 0, 0, 0, 1, 0, 0})};
  std::vector<Vec> in{v({-2, -1, 0, 0, 0, 0, 0}), v({-1, -2, 0, 0, 0, 0, 0})};
  Polyhedron expected(Matrix::from_rows(in, 7), Vec(2), Matrix::from_rows(eq, 7), Vec(4));
  CHECK(mutual_row_validity(piece, expected));

  auto b = run({"diagnose-mpcc", kDir + "/ex41.toml", "--lambda", "1,0", "--json"});
  CHECK(b.code == 1);
  auto bj = b.doc();
  REQUIRE(bj["result"]["mpcc_mfcq"]["branches"].size() == 2);
  for (const auto& br : bj["result"]["mpcc_mfcq"]["branches"]) CHECK(br["verdict"]["status"] == "FAILS");
  CHECK(bj["result"]["mpcc_licq"]["status"] == "FAILS");
  CHECK(bj["result"]["stationarity"]["weak"]["feasible"] == false);

  auto g = run({"diagnose-mpcc", kDir + "/ex41.toml", "--lambda", "1/2,1/2", "--direction", "3,0,2,0,0,0,0",
                "--json"});
  auto gj = g.doc();
  CHECK(gj["result"]["gcq_evidence"]["tag"] == "GACQ_VIOLATION_EVIDENCE");
  CHECK(gj["result"]["gcq_evidence"]["kind"] == "numerical evidence");
}

TEST_CASE("tangent-cone and probe") {
  auto m = run({"tangent-cone", kDir + "/ex41.toml", "--v", "1,0,0", "--vstar", "1,0,0", "--json"});
  CHECK(m.code == 0);
  CHECK(m.doc()["status"] == "MEMBER");
  auto n = run({"tangent-cone", kDir + "/ex41.toml", "--v", "1,0,0", "--vstar", "0,0,0", "--json"});
  CHECK(n.code == 1);
  CHECK(n.doc()["status"] == "NON_MEMBER");
  auto p = run({"probe", kDir + "/ex41.toml", "--v", "1,0,0", "--vstar", "1,0,0", "--json"});
  CHECK(p.code == 0);
  CHECK(p.doc()["result"]["report"]["verdict"] == "RATIO_VANISHES");
  auto d = run({"probe", kDir + "/ex41.toml", "--lambda", "1/2,1/2", "--direction", "3,3,2,2,0,0,0", "--json"});
  CHECK(d.doc()["result"]["report"]["verdict"] == "RATIO_VANISHES");
}

TEST_CASE("usage and input errors exit with 64") {
  CHECK(run({"analyze", "missing.toml"}).code == 64);
  auto j = run({"analyze", "missing.toml", "--json"});
  CHECK(j.code == 64);
  CHECK(j.doc()["status"] == "ERROR");
  CHECK(j.doc()["error"]["code"] == "USAGE");
  CHECK(run({"frobnicate", kDir + "/ex41.toml"}).code == 64);
  CHECK(run({}).code == 64);
  CHECK(run({"diagnose-mpcc", kDir + "/ex41.toml"}).code == 64);
  CHECK(run({"diagnose-mpcc", kDir + "/ex41.toml", "--lambda", "1"}).code == 64);
  CHECK(run({"diagnose-mpcc", kDir + "/ex41.toml", "--lambda", "1,1"}).code == 64);
  CHECK(run({"diagnose-mpcc", kDir + "/ex41.toml", "--lambda", "1/2,abc"}).code == 64);

  auto path = std::filesystem::temp_directory_path() / "mpeccq_cli_bad.toml";
  {
    std::ofstream f(path);
    f << "[dims]\nn = 1\nm = 1\np = 0\nq = 0\n[functions]\nphi = [\"y1 - \"]\n[point]\nx = [0]\ny = [0]\n";
  }
  auto bad = run({"validate", path.string(), "--json"});
  CHECK(bad.code == 64);
  CHECK(bad.doc()["error"]["code"] == "PARSE_ERROR");
  CHECK(bad.doc()["error"]["message"].get<std::string>().find("line") != std::string::npos);
  std::filesystem::remove(path);
}

TEST_CASE("exit codes follow the top-level status") {
  CHECK(exit_code_for("HOLDS") == ExitCode::Ok);
  CHECK(exit_code_for("OK") == ExitCode::Ok);
  CHECK(exit_code_for("MEMBER") == ExitCode::Ok);
  CHECK(exit_code_for("FAILS") == ExitCode::Fails);
  CHECK(exit_code_for("NON_MEMBER") == ExitCode::Fails);
  CHECK(exit_code_for("UNKNOWN") == ExitCode::Unknown);
  CHECK(exit_code_for("ERROR") == ExitCode::Usage);
  for (std::vector<std::string> args :
       {std::vector<std::string>{"validate", kDir + "/ex41.toml", "--json"},
        {"analyze", kDir + "/unique_mult.toml", "--json"},
        {"certify-mscq", kDir + "/identity_q0.toml", "--json"},
        {"diagnose-mpcc", kDir + "/unique_mult.toml", "--lambda", "0", "--json"}}) {
    auto r = run(args);
    auto j = r.doc();
    CHECK(r.code == j["exit_code"]);
    CHECK(r.code == static_cast<int>(exit_code_for(j["status"])));
  }
}

TEST_CASE("text output and thread fallback") {
  auto t = run({"validate", kDir + "/ex41.toml"});
  CHECK(t.code == 0);
  CHECK(t.out.find("validate") == 0);
  CHECK(t.out.find(": OK") != std::string::npos);
  ::setenv("MPEC_CQ_THREADS", "3", 1);
  auto j = run({"validate", kDir + "/ex41.toml", "--json"}).doc();
  ::unsetenv("MPEC_CQ_THREADS");
  CHECK(j["config"]["threads"] == 3);
  CHECK(run({"--help"}).code == 0);
}
