// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any criterion fails.
#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "mpeccq/certify.hpp"
#include "mpeccq/cli.hpp"
#include "mpeccq/lowerlevel.hpp"
#include "mpeccq/mpccdiag.hpp"
#include "mpeccq/oracle.hpp"
#include "mpeccq/polyhedra.hpp"
#include "property_suites.hpp"

using namespace mpeccq;
using nlohmann::json;

namespace {

std::string dir = MPECCQ_PROBLEMS_DIR;

struct Outcome {
  bool pass = true;
  std::string note;
  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      note = what;
    }
  }
};

json cli(std::vector<std::string> args, int& code) {
  args.push_back("--json");
  std::ostringstream out, err;
  code = run_cli(args, out, err);
  return json::parse(out.str());
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
  return Polyhedron(parse_rows(j["ineq"], d), parse_vec(j["ineq_rhs"]), parse_rows(j["eq"], d), parse_vec(j["eq_rhs"]));
}

InequalitySystem system_of(std::size_t d, const std::vector<std::string>& rows) {
  InequalitySystem s{d, {}};
  VarSpace vs = VarSpace::generic(d);
  for (const auto& r : rows) s.rows.push_back(parse_poly(r, vs));
  return s;
}

Outcome ac1() {
  Outcome o;
  int code = 0;
  json j = cli({"analyze", dir + "/ex41.toml"}, code);
  o.require(code == 0 && j["status"] == "OK", "analyze status");
  const json& lam = j["result"]["multiplier_set"];
  o.require(lam["eq"] == json::parse(R"([["1","1"]])") && lam["eq_rhs"] == json::parse(R"(["1"])"), "equality row");
  Polyhedron got = parse_polyhedron(lam);
  Polyhedron want(Matrix::from_rows({{-1, 0}, {0, -1}}, 2), Vec(2), Matrix::from_rows({{1, 1}}, 2), Vec{1});
  o.require(same_set(got, want), "multiplier set");
  o.require(j["result"]["extreme_points"] == json::parse(R"([["0","1"],["1","0"]])"), "extreme points");
  o.require(j["result"]["uniqueness"]["unique"] == false, "uniqueness");
  return o;
}

Outcome ac2() {
  Outcome o;
  int code = 0;
  json a = cli({"diagnose-mpcc", dir + "/ex41.toml", "--lambda", "1/2,1/2"}, code);
  const json& ba = a["result"]["mpcc_mfcq"]["branches"];
  o.require(ba.size() == 1 && ba[0]["verdict"]["status"] == "FAILS", "single branch at (1/2,1/2)");
  o.require(a["result"]["mpcc_licq"]["status"] == "FAILS", "LICQ at (1/2,1/2)");
  json b = cli({"diagnose-mpcc", dir + "/ex41.toml", "--lambda", "1,0"}, code);
  const json& bb = b["result"]["mpcc_mfcq"]["branches"];
  o.require(bb.size() == 2, "two branches at (1,0)");
  for (const auto& br : bb) o.require(br["verdict"]["status"] == "FAILS", "branch at (1,0)");
  o.require(b["result"]["mpcc_licq"]["status"] == "FAILS", "LICQ at (1,0)");
  return o;
}

Outcome ac3() {
  Outcome o;
  MpecProblem p = load_problem(dir + "/ex41.toml");
  for (Vec lam : {Vec{1, 0}, Vec{0, 1}, Vec{Rational(7) / 10, Rational(3) / 10}}) {
    StationarityResult w = stationarity_check(p, lam, StationarityMode::Weak);
    o.require(!w.feasible, "W-feasible at " + to_string(lam));
  }
  return o;
}

Outcome ac4() {
  Outcome o;
  int code = 0;
  json j = cli({"diagnose-mpcc", dir + "/ex41.toml", "--lambda", "1/2,1/2"}, code);
  const json& pieces = j["result"]["linearized_cone"]["pieces"];
  o.require(pieces.size() == 1, "one piece");
  if (!o.pass) return o;
  const Rational h = Rational(3) / 2;
  // variables (u1, u2, v1, v2, v3, mu1, mu2)
  Matrix eq = Matrix::from_rows({{-1, 0, h, 0, 0, 0, 0}, {0, -1, 0, h, 0, 0, 0}, {0, 0, 0, 0, 0, 1, 1},
                                 {0, 0, 0, 0, 1, 0, 0}},
                                7);
  Matrix in = Matrix::from_rows({{-2, -1, 0, 0, 0, 0, 0}, {-1, -2, 0, 0, 0, 0, 0}}, 7);
  Polyhedron expected(in, Vec(2), eq, Vec(4));
  o.require(mutual_row_validity(parse_polyhedron(pieces[0]), expected), "mutual row validity");
  return o;
}

Outcome ac5() {
  Outcome o;
  int code = 0;
  json g = cli({"diagnose-mpcc", dir + "/ex41.toml", "--lambda", "1/2,1/2", "--direction", "3,0,2,0,0,0,0",
                "--budget", "200", "--seed", "0"},
               code);
  o.require(g.contains("result") && g["result"].contains("gcq_evidence"), "d1 not accepted as a T^lin member");
  if (!o.pass) return o;
  const json& probe = g["result"]["gcq_evidence"]["probe"];
  o.require(probe["t"] == json::array({1e-1, 1e-2, 1e-3, 1e-4}), "t schedule");
  for (const auto& r : probe["ratio"]) o.require(r.get<double>() >= 0.05, "d1 ratio below 0.05");
  json d2 = cli({"probe", dir + "/ex41.toml", "--lambda", "1/2,1/2", "--direction", "3,3,2,2,0,0,0", "--budget", "200",
                 "--seed", "0"},
                code);
  const json& rr = d2["result"]["report"]["ratio"];
  o.require(!rr.empty() && rr.back().get<double>() < 1e-3, "d2 final ratio");
  return o;
}

Outcome ac6() {
  Outcome o;
  int code = 0;
  json j = cli({"certify-mscq", dir + "/ex41.toml"}, code);
  o.require(code == 0 && j["status"] == "HOLDS", "verdict");
  const json& pre = j["result"]["prerequisites"];
  o.require(pre.size() == 3, "three prerequisites");
  if (!o.pass) return o;
  o.require(pre[0]["method"] == "NNAMCQ" && pre[0]["status"] == "HOLDS", "lower-level NNAMCQ");
  o.require(pre[1]["method"] == "LINEAR" && pre[1]["status"] == "HOLDS", "upper-level LINEAR");
  o.require(pre[2]["status"] == "HOLDS", "EqNonDegG");
  const json& p1 = j["result"]["detail"]["phase_one"];
  o.require(p1.size() == 2, "phase one over both extreme points");
  for (const auto& e : p1) o.require(e["sign"] == "POSITIVE", "phase one sign");
  for (int t = 1; t <= 8; ++t) {
    json again = cli({"certify-mscq", dir + "/ex41.toml", "--threads", std::to_string(t)}, code);
    o.require(again["result"] == j["result"], "threads " + std::to_string(t));
  }
  return o;
}

Outcome ac7() {
  Outcome o;
  MpecProblem p = load_problem(dir + "/ex41.toml");
  const Vec y{0, 0, 0}, ys{0, 0, 1};
  ProbeOptions opts;  // budget 200, seed 0, t down to 1e-4
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> c(-2, 2), pos(0, 3);
  int members = 0, others = 0, tries = 0;
  while ((members < 10 || others < 10) && tries++ < 400) {
    Vec v{c(rng), c(rng), 0};  // K = {v : v3 = 0}
    GraphSlice s = graph_tangent_slice(p, y, ys, v);
    if (members < 10 && !s.empty) {
      const PolyVRep& g = s.set.vrep();
      Vec vs = g.vertices[static_cast<std::size_t>(pos(rng)) % g.vertices.size()];
      for (const auto& r : g.rays) axpy(vs, pos(rng), r);
      for (const auto& l : g.lineality) axpy(vs, c(rng), l);
      o.require(graph_tangent_member(p, y, ys, v, vs).member, "slice point rejected by the membership LP");
      ProbeReport r = tangent_ratio_probe(p, y, ys, v, vs, opts);
      o.require(r.verdict == ProbeVerdict::RatioVanishes && r.t.back() == 1e-4 && r.ratio.back() < 1e-3,
                "member " + to_string(v) + " / " + to_string(vs));
      ++members;
    } else if (others < 10) {
      Vec vs{c(rng), c(rng), c(rng)};
      if (graph_tangent_member(p, y, ys, v, vs).member) continue;
      ProbeReport r = tangent_ratio_probe(p, y, ys, v, vs, opts);
      o.require(r.verdict != ProbeVerdict::RatioVanishes, "non-member " + to_string(v) + " / " + to_string(vs));
      ++others;
    }
  }
  o.require(members == 10 && others == 10, "could not draw 10 + 10 directions");
  return o;
}

Outcome ac8() {
  Outcome o;
  o.require(soscms_check(system_of(2, {"-z1^2 - z2^2"}), Vec(2)).status == CqStatus::Holds, "-z1^2-z2^2");
  CqVerdict f = soscms_check(system_of(1, {"z1^2"}), Vec(1));
  o.require(f.status == CqStatus::Fails, "z1^2 status");
  const Vec* lam = find_vec(f.witness, "lambda");
  const Vec* w = find_vec(f.witness, "w");
  o.require(lam && w && *lam == Vec{1} && *w == Vec{1}, "z1^2 witness");
  InequalitySystem pm = system_of(2, {"z1", "-z1"});
  CqVerdict cas = mscq_cascade(pm, Vec(2));
  o.require(cas.status == CqStatus::Holds && cas.method == "LINEAR", "cascade on (z1,-z1)");
  o.require(soscms_check(pm, Vec(2)).status == CqStatus::Fails, "raw SOSCMS on (z1,-z1)");
  return o;
}

Outcome ac9() {
  Outcome o;
  for (const auto& r : props::run_all()) {
    std::cout << "    " << (r.ok() ? "ok  " : "FAIL") << " " << r.name << ": " << r.cases << " cases, " << r.checks
              << " checks\n";
    o.require(r.ok(), r.name + (r.failures.empty() ? "" : ": " + r.failures.front()));
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) dir = argv[1];
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"AC1 multiplier analysis", ac1},       {"AC2 MPCC-MFCQ/LICQ failure", ac2},
      {"AC3 W-stationarity", ac3},            {"AC4 linearized-cone fidelity", ac4},
      {"AC5 GCQ-gap evidence", ac5},          {"AC6 headline certification", ac6},
      {"AC7 tangent-cone cross-validation", ac7}, {"AC8 SOSCMS sanity", ac8},
      {"AC9 property suites", ac9}};
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.note = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.require(secs < 60, "over 60 s");
    std::cout << name.substr(0, 3) << ' ' << (o.pass ? "PASS" : "FAIL") << ' ' << name.substr(4) << " ("
              << static_cast<int>(secs * 1000) << " ms)" << (o.note.empty() ? "" : ": " + o.note) << '\n';
    failed += !o.pass;
  }
  return failed ? 1 : 0;
}
