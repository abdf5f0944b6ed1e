#include <doctest.h>

#include "mpeccq/errors.hpp"
#include "mpeccq/linalg.hpp"
#include "mpeccq/lp.hpp"

using namespace mpeccq;

namespace {
Matrix rows(std::vector<Vec> r, std::size_t cols) { return Matrix::from_rows(r, cols); }
}  // namespace

TEST_CASE("rational literals are exact") {
  CHECK(parse_rational("1/2") == Rational(1, 2));
  CHECK(parse_rational("0.5") == Rational(1, 2));
  CHECK(parse_rational("-1.25e-1") == Rational(-1, 8));
  CHECK(parse_rational(" 6/4 ").get_str() == "3/2");
  CHECK_THROWS_AS(parse_rational("1/0"), Error);
  CHECK_THROWS_AS(parse_rational("abc"), Error);
  CHECK(parse_rational_list("1/2,1/2") == Vec{Rational(1, 2), Rational(1, 2)});
  CHECK(to_string(Vec{Rational(2) / 4, Rational(-3)}) == "[1/2, -3]");
}

TEST_CASE("primitive scaling") {
  CHECK(primitive(Vec{Rational(1, 2), Rational(1, 3)}) == Vec{3, 2});
  CHECK(primitive(Vec{-4, 6}) == Vec{-2, 3});
  CHECK(primitive(Vec{0, 0}) == Vec{0, 0});
}

TEST_CASE("linear_basis") {
  auto id = linear_basis(Matrix::identity(3));
  CHECK(id.rank == 3);
  CHECK(id.nullspace_basis.empty());

  auto grads = linear_basis(rows({{0, 0, 1}, {0, 0, 1}}, 3));
  CHECK(grads.rank == 1);
  CHECK_FALSE(grads.row_independent);

  auto two = linear_basis(rows({{1, 0, 0}, {0, 1, 0}}, 3));
  REQUIRE(two.nullspace_basis.size() == 1);
  CHECK(two.nullspace_basis[0] == Vec{0, 0, 1});

  Matrix m = rows({{1, 2, 3, 4}, {2, 4, 6, 8}, {1, 0, 1, 0}}, 4);
  auto lb = linear_basis(m);
  CHECK(lb.rank + lb.nullspace_basis.size() == 4);
  for (const auto& v : lb.nullspace_basis) CHECK(is_zero(m.multiply(v)));
}

TEST_CASE("solve_linear and projection") {
  auto x = solve_linear(rows({{1, 1}, {1, -1}}, 2), Vec{2, 0});
  REQUIRE(x);
  CHECK(*x == Vec{1, 1});
  CHECK_FALSE(solve_linear(rows({{1, 1}, {1, 1}}, 2), Vec{1, 2}));
  Vec p = project_out(Vec{1, 2, 3}, {Vec{1, 0, 0}});
  CHECK(p == Vec{0, 2, 3});
}

TEST_CASE("lp: max x s.t. x <= 1") {
  LpProblem p = LpProblem::feasibility(1);
  p.objective = {1};
  p.sense = LpSense::Maximize;
  p.ineq = rows({{1}}, 1);
  p.ineq_rhs = {1};
  auto out = lp_solve(p);
  REQUIRE(out.status == LpStatus::Optimal);
  CHECK(out.primal == Vec{1});
  CHECK(out.value == 1);
  CHECK(out.dual_ineq == Vec{1});
  CHECK(verify_certificate(p, out));
}

TEST_CASE("lp: vertex of the multiplier segment") {
  LpProblem p = LpProblem::feasibility(2);
  p.objective = {1, 0};
  p.sense = LpSense::Maximize;
  p.ineq = rows({{-1, 0}, {0, -1}}, 2);
  p.ineq_rhs = {0, 0};
  p.eq = rows({{1, 1}}, 2);
  p.eq_rhs = {1};
  auto out = lp_solve(p);
  REQUIRE(out.status == LpStatus::Optimal);
  CHECK(out.primal == Vec{1, 0});
  CHECK(verify_certificate(p, out));
}

TEST_CASE("lp: contradictory bounds give a Farkas vector") {
  LpProblem p = LpProblem::feasibility(1);
  p.ineq = rows({{1}, {-1}}, 1);
  p.ineq_rhs = {-1, -1};
  auto out = lp_solve(p);
  REQUIRE(out.status == LpStatus::Infeasible);
  CHECK(out.farkas_ineq == Vec{1, 1});
  CHECK(verify_certificate(p, out));
}

TEST_CASE("lp: unbounded ray") {
  LpProblem p = LpProblem::feasibility(2);
  p.objective = {1, 1};
  p.sense = LpSense::Maximize;
  p.ineq = rows({{1, -1}}, 2);
  p.ineq_rhs = {0};
  auto out = lp_solve(p);
  REQUIRE(out.status == LpStatus::Unbounded);
  CHECK(verify_certificate(p, out));
}

TEST_CASE("lp: redundant equalities") {
  LpProblem p = LpProblem::feasibility(2);
  p.objective = {1, 2};
  p.eq = rows({{1, 1}, {2, 2}}, 2);
  p.eq_rhs = {1, 2};
  p.ineq = rows({{-1, 0}, {0, -1}}, 2);
  p.ineq_rhs = {0, 0};
  auto out = lp_solve(p);
  REQUIRE(out.status == LpStatus::Optimal);
  CHECK(out.value == 1);
  CHECK(verify_certificate(p, out));
}

TEST_CASE("lp: shape errors") {
  LpProblem p = LpProblem::feasibility(2);
  p.ineq = Matrix(1, 3);
  p.ineq_rhs = {0};
  try {
    lp_solve(p);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
}
