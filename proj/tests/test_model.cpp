#include <doctest.h>

#include <filesystem>
#include <random>

#include "mpeccq/problem.hpp"

using namespace mpeccq;

namespace {
const std::string kDir = MPECCQ_PROBLEMS_DIR;
Vec v(std::initializer_list<int> xs) {
  Vec r;
  for (int x : xs) r.emplace_back(x);
  return r;
}
}  // namespace

TEST_CASE("parse polynomials") {
  VarSpace vars = VarSpace::problem(2, 3);
  Poly g1 = parse_poly("y3 + 1/2*y1^2", vars);
  CHECK(g1.terms().size() == 2);
  CHECK(g1.terms().at(Exponents{0, 0, 0, 0, 1}) == 1);
  CHECK(g1.terms().at(Exponents{0, 0, 2, 0, 0}) == Rational(1, 2));
  Poly G1 = parse_poly("-x1 - 2*x2", vars);
  CHECK(G1.is_affine());
  CHECK(G1.degree() == 1);
  CHECK(parse_poly("0.5*x1", vars) == parse_poly("1/2*x1", vars));
  CHECK(parse_poly("(x1 + x2)^2", vars) == parse_poly("x1^2 + 2*x1*x2 + x2^2", vars));
  CHECK(parse_poly("-y1^2", vars) == parse_poly("-(y1^2)", vars));
  CHECK(parse_poly("x1/4", vars) == parse_poly("1/4*x1", vars));
}

TEST_CASE("parse errors carry positions") {
  VarSpace vars = VarSpace::problem(2, 3);
  try {
    parse_poly("x1*(", vars);
    FAIL("expected error");
  } catch (const ParseError& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(e.line() == 1);
    CHECK(e.column() == 5);
  }
  CHECK_THROWS_AS(parse_poly("x1^-1", vars), ParseError);
  CHECK_THROWS_AS(parse_poly("x1/x2", vars), ParseError);
  CHECK_THROWS_AS(parse_poly("x1^2^2", vars), ParseError);
  CHECK_THROWS_AS(parse_poly("2x1", vars), ParseError);
  try {
    parse_poly("x3 + 1", vars);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownVariable);
  }
}

TEST_CASE("differentiate and evaluate") {
  VarSpace vars = VarSpace::problem(0, 3);
  Poly g1 = parse_poly("y3 + 1/2*y1^2", vars);
  CHECK(g1.differentiate(0) == parse_poly("y1", vars));
  CHECK(g1.gradient(v({0, 0, 0})) == v({0, 0, 1}));
  CHECK(parse_poly("1/2*y1^2", vars).differentiate(0).differentiate(0) == Poly::constant(3, 1));
  VarSpace xs = VarSpace::problem(2, 0);
  CHECK(parse_poly("x1 - 2*x2", xs).evaluate(v({3, 1})) == 1);
}

TEST_CASE("product rule holds identically") {
  VarSpace vars = VarSpace::generic(3);
  Poly f = parse_poly("z1^2*z2 - 3*z3 + 1/3", vars);
  Poly g = parse_poly("z2^3 + z1*z3", vars);
  for (std::size_t i = 0; i < 3; ++i)
    CHECK((f * g).differentiate(i) == f * g.differentiate(i) + g * f.differentiate(i));
}

TEST_CASE("symbolic derivatives match central differences") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> coef(-5, 5), expo(0, 3);
  std::uniform_real_distribution<double> pt(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    Poly f(3);
    for (int t = 0; t < 5; ++t) f.add_term(Exponents{static_cast<std::uint32_t>(expo(rng)), static_cast<std::uint32_t>(expo(rng)),
                                                     static_cast<std::uint32_t>(expo(rng))},
                                           coef(rng));
    std::vector<double> z{pt(rng), pt(rng), pt(rng)};
    for (std::size_t i = 0; i < 3; ++i) {
      double h = 1e-5;
      auto zp = z, zm = z;
      zp[i] += h;
      zm[i] -= h;
      double fd = (f.evaluate(std::span<const double>(zp)) - f.evaluate(std::span<const double>(zm))) / (2 * h);
      double ex = f.differentiate(i).evaluate(std::span<const double>(z));
      CHECK(std::abs(fd - ex) <= 1e-6 * std::max(1.0, std::abs(ex)));
    }
  }
}

TEST_CASE("problem file round trip on the bundled corpus") {
  for (const auto& entry : std::filesystem::directory_iterator(kDir)) {
    if (entry.path().extension() != ".toml") continue;
    CAPTURE(entry.path().string());
    MpecProblem p = load_problem(entry.path().string());
    MpecProblem q = parse_problem(serialize_problem(p));
    CHECK(structurally_equal(p, q));
    CHECK(serialize_problem(q) == serialize_problem(p));
  }
}

TEST_CASE("problem file errors") {
  CHECK_THROWS_AS(parse_problem("[dims]\nn = 1\n"), ParseError);
  try {
    parse_problem("[dims]\nn=1\nm=1\np=0\nq=0\n[functions]\nphi = [\"y1 - \"]\n[point]\nx=[0]\ny=[0]\n");
    FAIL("expected error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 7);
  }
  try {
    parse_problem("[dims]\nn=1\nm=2\np=0\nq=0\n[functions]\nphi = [\"y1\"]\n[point]\nx=[0]\ny=[0,0]\n");
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
  try {
    parse_problem("[dims]\nn=1\nm=1\np=0\nq=1\n[functions]\nphi = [\"y1\"]\ng = [\"y1 + x1\"]\n[point]\nx=[0]\ny=[0]\n");
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownVariable);
  }
  try {
    load_problem("missing.toml");
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Usage);
  }
}

TEST_CASE("build_mpcc reproduces the KKT system") {
  MpecProblem p = load_problem(kDir + "/ex41.toml");
  MpccSystem s = build_mpcc(p);
  VarSpace vars = s.vars();
  CHECK(s.h[0] == parse_poly("y1 - x1 + l1*y1", vars));
  CHECK(s.h[1] == parse_poly("y2 - x2 + l2*y2", vars));
  CHECK(s.h[2] == parse_poly("-1 + l1 + l2", vars));

  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
  for (int trial = 0; trial < 50; ++trial) {
    Vec z(vars.size());
    for (auto& c : z) c = Rational(num(rng)) / den(rng);
    Vec xy(z.begin(), z.begin() + 5), lam(z.begin() + 5, z.end());
    Vec yy(z.begin() + 2, z.begin() + 5);
    MpecProblem at = p;
    at.x = Vec(z.begin(), z.begin() + 2);
    Matrix grad = at.grad_g(yy);
    Vec phi;
    for (const auto& f : p.phi) phi.push_back(f.evaluate(xy));
    Vec expect = add(phi, grad.transpose().multiply(lam));
    for (std::size_t j = 0; j < 3; ++j) CHECK(s.h[j].evaluate(z) == expect[j]);
  }

  MpecProblem q0 = load_problem(kDir + "/identity_q0.toml");
  MpccSystem s0 = build_mpcc(q0);
  CHECK(s0.h[0] == q0.phi[0]);
}

TEST_CASE("validate_point") {
  MpecProblem p = load_problem(kDir + "/ex41.toml");
  auto r = validate_point(p);
  CHECK(r.ok());
  CHECK(r.ystar == v({0, 0, 1}));

  MpecProblem bad = p;
  bad.y = v({0, 0, 1});
  auto rb = validate_point(bad);
  CHECK_FALSE(rb.g_feasible);
  CHECK_FALSE(rb.ok());

  MpecProblem flipped = p;
  flipped.phi[2] = Poly::constant(5, 1);
  auto rf = validate_point(flipped);
  CHECK(rf.g_feasible);
  CHECK(rf.G_feasible);
  CHECK_FALSE(rf.multiplier_feasible);
}
