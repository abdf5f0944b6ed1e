#include <doctest.h>

#include "mpeccq/errors.hpp"
#include "mpeccq/polyhedra.hpp"

using namespace mpeccq;

namespace {
Matrix rows(std::vector<Vec> r, std::size_t cols) { return Matrix::from_rows(r, cols); }
Vec v(std::initializer_list<int> xs) {
  Vec r;
  for (int x : xs) r.emplace_back(x);
  return r;
}
Polyhedron nonpositive_orthant(std::size_t n) {
  return Polyhedron(Matrix::identity(n), Vec(n), Matrix(0, n), Vec{});
}
Polyhedron lambda_segment() {
  return Polyhedron(rows({v({-1, 0}), v({0, -1})}, 2), Vec(2), rows({v({1, 1})}, 2), Vec{1});
}
}  // namespace

TEST_CASE("dd_convert: orthant") {
  auto k = PolyCone::from_hrep(rows({v({-1, 0}), v({0, -1})}, 2), Matrix(0, 2));
  CHECK(k.rays() == std::vector<Vec>{v({0, 1}), v({1, 0})});
  CHECK(k.lineality().empty());
}

TEST_CASE("dd_convert: halfspace v3 <= 0") {
  auto k = PolyCone::from_hrep(rows({v({0, 0, 1})}, 3), Matrix(0, 3));
  CHECK(k.lineality() == std::vector<Vec>{v({1, 0, 0}), v({0, 1, 0})});
  CHECK(k.rays() == std::vector<Vec>{v({0, 0, -1})});
}

TEST_CASE("dd_convert: zero cone") {
  auto k = PolyCone::from_hrep(Matrix(0, 3), Matrix::identity(3));
  CHECK(k.is_zero());
}

TEST_CASE("dd_convert: cone over a square") {
  // x3 >= |x1|, x3 >= |x2|
  auto k = PolyCone::from_hrep(rows({v({1, 0, -1}), v({-1, 0, -1}), v({0, 1, -1}), v({0, -1, -1})}, 3), Matrix(0, 3));
  CHECK(k.rays().size() == 4);
  for (const auto& r : k.rays()) CHECK(r[2] == 1);
}

TEST_CASE("polar") {
  CHECK(polar(PolyCone::full(2)).is_zero());
  auto sub = PolyCone::from_hrep(Matrix(0, 3), rows({v({0, 0, 1})}, 3));
  auto ps = polar(sub);
  CHECK(ps.rays().empty());
  CHECK(ps.lineality() == std::vector<Vec>{v({0, 0, 1})});
  auto ray = PolyCone::from_generators(2, {v({1, 1})}, {});
  auto pr = polar(ray);
  CHECK(pr.contains(v({-1, 0})));
  CHECK(pr.contains(v({1, -1})));
  CHECK_FALSE(pr.contains(v({1, 0})));
  CHECK(same_set(pr, PolyCone::from_hrep(rows({v({1, 1})}, 2), Matrix(0, 2))));
  CHECK(same_set(polar(pr), ray));
}

TEST_CASE("extreme points") {
  auto e = extreme_points(lambda_segment());
  CHECK(e.points == std::vector<Vec>{v({0, 1}), v({1, 0})});
  Polyhedron square(rows({v({1, 0}), v({-1, 0}), v({0, 1}), v({0, -1})}, 2), v({1, 0, 1, 0}), Matrix(0, 2), Vec{});
  CHECK(extreme_points(square).points.size() == 4);
  Polyhedron ray(rows({v({-1, 0}), v({0, -1})}, 2), Vec(2), rows({v({1, -1})}, 2), Vec{0});
  auto er = extreme_points(ray);
  CHECK_FALSE(er.not_pointed);
  CHECK(er.points == std::vector<Vec>{v({0, 0})});
  CHECK(ray.vrep().rays == std::vector<Vec>{v({1, 1})});
  Polyhedron line(Matrix(0, 2), Vec{}, rows({v({1, 0})}, 2), Vec{0});
  CHECK(extreme_points(line).not_pointed);
  Polyhedron empty(rows({v({1}), v({-1})}, 1), v({-1, -1}), Matrix(0, 1), Vec{});
  CHECK(empty.empty());
  CHECK_THROWS_AS(extreme_points(empty), Error);
}

TEST_CASE("tangent and normal cones") {
  auto p = nonpositive_orthant(2);
  auto t = tangent_cone_poly(p, v({0, -1}));
  CHECK(same_set(t, PolyCone::from_hrep(rows({v({1, 0})}, 2), Matrix(0, 2))));
  auto n = normal_cone_poly(p, v({0, 0}));
  CHECK(n.rays() == std::vector<Vec>{v({0, 1}), v({1, 0})});
  CHECK(same_set(tangent_cone_poly(p, v({-1, -1})), PolyCone::full(2)));
  try {
    tangent_cone_poly(p, v({1, 0}));
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PointNotInSet);
  }
}

TEST_CASE("tangent cone of a product is the product of tangents") {
  auto a = nonpositive_orthant(1);
  auto prod = nonpositive_orthant(2);
  auto lhs = tangent_cone_poly(prod, v({0, 0}));
  auto rhs = product(tangent_cone_poly(a, v({0})), tangent_cone_poly(a, v({0})));
  CHECK(same_set(lhs, rhs));
}

TEST_CASE("directional normal cone") {
  auto p = nonpositive_orthant(2);
  auto d = directional_normal_cone_poly(p, v({0, 0}), v({-1, 0}));
  REQUIRE(d);
  CHECK(d->rays() == std::vector<Vec>{v({0, 1})});
  auto full = directional_normal_cone_poly(p, v({0, 0}), v({0, 0}));
  REQUIRE(full);
  CHECK(same_set(*full, normal_cone_poly(p, v({0, 0}))));
  CHECK_FALSE(directional_normal_cone_poly(p, v({0, 0}), v({1, 0})));
}

TEST_CASE("affine image") {
  Matrix grad = rows({v({0, 0}), v({0, 0}), v({1, 1})}, 2);
  auto img = affine_image(lambda_segment(), grad, Vec(3));
  CHECK(img.vrep().vertices == std::vector<Vec>{v({0, 0, 1})});
  CHECK(img.vrep().rays.empty());
  CHECK(same_set(affine_image(lambda_segment(), Matrix::identity(2), Vec(2)), lambda_segment()));
  Polyhedron square(rows({v({1, 0}), v({-1, 0}), v({0, 1}), v({0, -1})}, 2), v({1, 0, 1, 0}), Matrix(0, 2), Vec{});
  auto proj = affine_image(square, rows({v({1, 0})}, 2), Vec(1));
  CHECK(proj.vrep().vertices == std::vector<Vec>{v({0}), v({1})});
}

TEST_CASE("disjunctive polar") {
  DisjunctiveSet d{2, {Polyhedron(Matrix::from_rows({v({-1, 0}), v({0, -1})}, 2), Vec(2), Matrix(0, 2), Vec{}),
                       nonpositive_orthant(2)}};
  CHECK(disjunctive_polar(d).is_zero());
  DisjunctiveSet single{2, {nonpositive_orthant(2)}};
  CHECK(same_set(disjunctive_polar(single), polar(nonpositive_orthant(2).recession_cone())));
  DisjunctiveSet with_full{2, {nonpositive_orthant(2), Polyhedron(Matrix(0, 2), Vec{}, Matrix(0, 2), Vec{})}};
  CHECK(disjunctive_polar(with_full).is_zero());
}

TEST_CASE("canonical H-rep of the multiplier segment") {
  Polyhedron p(rows({v({-2, 0}), v({0, -1}), v({-1, -1})}, 2), Vec(3), rows({v({2, 2}), v({1, 1})}, 2), v({2, 1}));
  auto c = canonical_hrep(p);
  CHECK(c.eq().rows() == 1);
  CHECK(c.eq().row_vec(0) == v({1, 1}));
  CHECK(c.eq_rhs() == v({1}));
  CHECK(c.ineq().rows() == 2);
  CHECK(same_set(c, lambda_segment()));
}
