#include <doctest.h>

#include "mpeccq/certify.hpp"
#include "mpeccq/errors.hpp"

using namespace mpeccq;

namespace {
const std::string kDir = MPECCQ_PROBLEMS_DIR;
Vec v(std::initializer_list<Rational> xs) { return Vec(xs); }

InequalitySystem sys(std::size_t d, std::initializer_list<const char*> rows) {
  InequalitySystem s{d, {}};
  VarSpace vs = VarSpace::generic(d);
  for (const char* r : rows) s.rows.push_back(parse_poly(r, vs));
  return s;
}

Matrix mat(std::initializer_list<std::initializer_list<Rational>> rows) {
  std::vector<Vec> r;
  for (auto row : rows) r.emplace_back(row);
  return Matrix::from_rows(r, r.front().size());
}
}  // namespace

TEST_CASE("quadratic form sign: positive on a subspace") {
  QuadFormQuery q{mat({{2, 0, 0}, {0, 1, 0}, {0, 0, 0}}), {}, {v({1, 0, 0}), v({0, 1, 0})},
                  {v({1, 0, 0}), v({0, 1, 0}), v({0, 0, 1})}, 12};
  auto r = quadratic_form_sign_on_cone(q);
  CHECK(r.sign == QuadSign::Positive);
}

TEST_CASE("quadratic form sign: witnesses at generators") {
  std::vector<Vec> full{v({1, 0}), v({0, 1})};
  auto r = quadratic_form_sign_on_cone({mat({{1, 0}, {0, -1}}), full, {}, full, 12});
  REQUIRE(r.sign == QuadSign::Witness);
  CHECK(r.witness == v({0, 1}));
  CHECK(r.witness_value == -1);
  auto s = quadratic_form_sign_on_cone({mat({{0, 1}, {1, 0}}), full, {}, full, 0});
  REQUIRE(s.sign == QuadSign::Witness);
  CHECK(s.witness == v({1, 0}));
  CHECK(s.witness_value == 0);
}

TEST_CASE("quadratic form sign: subdivision and depth") {
  std::vector<Vec> full{v({1, 0}), v({0, 1})};
  // Positive definite but with orthogonal generators: needs one bisection.
  auto r = quadratic_form_sign_on_cone({mat({{2, 0}, {0, 2}}), {}, full, full, 3});
  CHECK(r.sign == QuadSign::Positive);
  CHECK(r.cells > 4);
  auto u = quadratic_form_sign_on_cone({mat({{2, 0}, {0, 2}}), {}, full, full, 0});
  CHECK(u.sign == QuadSign::Unknown);
  // Copositive but not positive definite.
  auto c = quadratic_form_sign_on_cone({mat({{1, -1}, {-1, 2}}), full, {}, full, 12});
  CHECK(c.sign == QuadSign::Positive);
  // Negative inside the cone, positive at the generators.
  auto n = quadratic_form_sign_on_cone({mat({{1, -3}, {-3, 1}}), full, {}, full, 12});
  REQUIRE(n.sign == QuadSign::Witness);
  CHECK(quad_value(mat({{1, -3}, {-3, 1}}), n.witness) <= 0);
}

TEST_CASE("quadratic form sign: qualifier subspace") {
  // x^T Q x = x1^2 on R^2, required only where x1 != 0.
  std::vector<Vec> full{v({1, 0}), v({0, 1})};
  auto r = quadratic_form_sign_on_cone({mat({{1, 0}, {0, 0}}), {}, full, {v({1, 0})}, 12});
  CHECK(r.sign == QuadSign::Positive);
  auto s = quadratic_form_sign_on_cone({mat({{1, 0}, {0, 0}}), {}, full, full, 12});
  CHECK(s.sign == QuadSign::Witness);
}

TEST_CASE("triangulation covers a square-based cone") {
  std::vector<Vec> rays{v({1, 0, 1}), v({0, 1, 1}), v({-1, 0, 1}), v({0, -1, 1})};
  auto t = triangulate_pointed(rays);
  CHECK(t.size() == 2);
  for (const auto& s : t) CHECK(s.size() == 3);
}

TEST_CASE("nnamcq_check") {
  auto f = nnamcq_check(sys(2, {"z1", "-z1"}), v({0, 0}));
  CHECK(f.status == CqStatus::Fails);
  CHECK(*find_vec(f.witness, "lambda") == v({1, 1}));
  auto h = nnamcq_check(sys(1, {"z1"}), v({0}));
  CHECK(h.status == CqStatus::Holds);
  auto p = load_problem(kDir + "/ex41.toml");
  CHECK(nnamcq_check(lower_system(p), p.y).status == CqStatus::Holds);
  bool threw = false;
  try {
    nnamcq_check(sys(1, {"z1 - 1"}), v({2}));
  } catch (const Error& e) {
    threw = e.code() == ErrorCode::InfeasiblePoint;
  }
  CHECK(threw);
}

TEST_CASE("foscms_check") {
  CHECK(foscms_check(sys(2, {"z1 + z2", "z1 - z2"}), v({0, 0})).status == CqStatus::Holds);
  auto f = foscms_check(sys(2, {"z1", "-z1"}), v({0, 0}));
  REQUIRE(f.status == CqStatus::Fails);
  CHECK(*find_vec(f.witness, "lambda") == v({1, 1}));
  CHECK(*find_vec(f.witness, "w") == v({0, 1}));
  CHECK(foscms_check(sys(1, {"z1^2 - 1"}), v({0})).status == CqStatus::Holds);
  auto s = foscms_check(sys(2, {"z1", "z2"}), v({0, 0}));
  CHECK(s.status == CqStatus::Holds);
  auto strong = foscms_check(sys(1, {"z1", "-z1"}), v({0}));
  CHECK(strong.status == CqStatus::Holds);
  CHECK(strong.certificate["kind"] == "STRONG_SUBREG");
}

TEST_CASE("soscms_check") {
  CHECK(soscms_check(sys(2, {"-z1^2 - z2^2"}), v({0, 0})).status == CqStatus::Holds);
  auto f = soscms_check(sys(1, {"z1^2"}), v({0}));
  REQUIRE(f.status == CqStatus::Fails);
  CHECK(*find_vec(f.witness, "lambda") == v({1}));
  CHECK(*find_vec(f.witness, "w") == v({1}));
  CHECK(soscms_check(sys(2, {"z1", "-z1"}), v({0, 0})).status == CqStatus::Fails);
}

TEST_CASE("mscq_cascade") {
  auto lin = mscq_cascade(sys(2, {"z1", "-z1"}), v({0, 0}));
  CHECK(lin.status == CqStatus::Holds);
  CHECK(lin.method == "LINEAR");
  auto p = load_problem(kDir + "/ex41.toml");
  auto g = mscq_cascade(lower_system(p), p.y);
  CHECK(g.status == CqStatus::Holds);
  CHECK(g.method == "NNAMCQ");
  auto G = mscq_cascade(upper_system(p), p.point());
  CHECK(G.method == "LINEAR");
  auto u = mscq_cascade(sys(1, {"z1^2"}), v({0}));
  CHECK(u.status == CqStatus::Unknown);
  CHECK(u.steps.size() == 3);
}

TEST_CASE("nondeg_g_check") {
  auto p = load_problem(kDir + "/ex41.toml");
  CHECK(nondeg_g_check(p).status == CqStatus::Holds);
  auto make = [](const char* g1, const char* g2) {
    MpecProblem q = load_problem(kDir + "/unique_mult.toml");
    VarSpace vs = q.vars();
    q.p = g2 ? 2 : 1;
    q.G = {parse_poly(g1, vs)};
    if (g2) q.G.push_back(parse_poly(g2, vs));
    return q;
  };
  CHECK(nondeg_g_check(make("y1 - x1", nullptr)).status == CqStatus::Holds);
  // eta = (1,0) lies in the cone and grad_y G^T eta = 1.
  auto pair = nondeg_g_check(make("y1", "-y1"));
  CHECK(pair.status == CqStatus::Fails);
  CHECK(*find_vec(pair.witness, "eta") == v({0, 1}));
  auto f = nondeg_g_check(make("y1", "y1"));
  REQUIRE(f.status == CqStatus::Fails);
  auto eta = *find_vec(f.witness, "eta");
  CHECK(eta.size() == 2);
  CHECK(eta[0] + eta[1] != 0);
}

TEST_CASE("certify_mscq_mpec on the worked example") {
  auto p = load_problem(kDir + "/ex41.toml");
  auto r = certify_mscq_mpec(p);
  CHECK(r.status == CqStatus::Holds);
  CHECK(r.method == "PHASE_I");
  REQUIRE(r.prerequisites.size() == 3);
  CHECK(r.prerequisites[0].method == "NNAMCQ");
  CHECK(r.prerequisites[1].method == "LINEAR");
  CHECK(r.prerequisites[2].status == CqStatus::Holds);
  CHECK(r.detail["phase_one"].size() == 2);
  for (const auto& e : r.detail["phase_one"]) CHECK(e["sign"] == "POSITIVE");
  for (unsigned t : {1u, 2u, 4u}) {
    auto again = certify_mscq_mpec(p, {12, std::size_t{1} << 20, t});
    CHECK(to_json(again).dump() == to_json(r).dump());
  }
}

TEST_CASE("certify_mscq_mpec without lower-level constraints") {
  auto r = certify_mscq_mpec(load_problem(kDir + "/identity_q0.toml"));
  CHECK(r.status == CqStatus::Holds);
}

TEST_CASE("certify_mscq_mpec on the modified example") {
  auto p = load_problem(kDir + "/ex41_modified.toml");
  auto r = certify_mscq_mpec(p);
  REQUIRE(r.status == CqStatus::Fails);
  CHECK(r.scope == "sufficient condition");
  CHECK(r.method == "PHASE_II");
  MpecWitness t{*find_vec(r.witness, "u"), *find_vec(r.witness, "v"), *find_vec(r.witness, "lambda"),
                *find_vec(r.witness, "eta"), *find_vec(r.witness, "w")};
  CHECK(t.u == v({0, 0}));
  CHECK(t.v == v({0, 1, 0}));
  CHECK(t.lambda == v({0, 1}));
  CHECK(t.eta == v({1, 0}));
  CHECK(t.w == v({1, 2, 0}));
  CHECK(verify_witness(p, t).ok());
}

TEST_CASE("verify_witness rejections") {
  auto p = load_problem(kDir + "/ex41.toml");
  MpecWitness zero{v({0, 0}), v({0, 0, 0}), v({1, 0}), v({0, 0}), v({0, 0, 0})};
  auto z = verify_witness(p, zero);
  CHECK_FALSE(z.ok());
  CHECK_FALSE(z.uv_nonzero);
  MpecWitness t{v({0, 0}), v({1, 0, 0}), v({1, 0}), v({0, 0}), v({1, 0, 0})};
  auto r = verify_witness(p, t);
  CHECK_FALSE(r.ok());
  CHECK_FALSE(r.ms4);
  CHECK(r.psi > 0);
}
