#pragma once

#include <vector>

#include "mpeccq/matrix.hpp"

namespace mpeccq {

/// Sign of x^T Q x on cone(rays) + span(lineality), required only where the projection of x onto span(qualifier)
/// is nonzero.
struct QuadFormQuery {
  Matrix q;
  std::vector<Vec> rays;
  std::vector<Vec> lineality;
  std::vector<Vec> qualifier;  // basis of S
  unsigned depth = 12;
};

enum class QuadSign { Positive, Witness, Unknown };

struct QuadFormResult {
  QuadSign sign = QuadSign::Unknown;
  Vec witness;
  Rational witness_value;
  std::size_t cells = 0;
  unsigned deepest = 0;
};

QuadFormResult quadratic_form_sign_on_cone(const QuadFormQuery& query);

/// x^T Q x.
Rational quad_value(const Matrix& q, std::span<const Rational> x);
/// True when x has a nonzero component along span(basis).
bool projects_nonzero(std::span<const Rational> x, const std::vector<Vec>& basis);

/// Simplicial cones (as index lists into `rays`) covering cone(rays); rays must span a pointed cone.
std::vector<std::vector<std::size_t>> triangulate_pointed(const std::vector<Vec>& rays);

}  // namespace mpeccq
