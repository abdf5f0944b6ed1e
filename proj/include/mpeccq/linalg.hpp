#pragma once

#include <optional>
#include <vector>

#include "mpeccq/matrix.hpp"

namespace mpeccq {

struct Rref {
  Matrix reduced;
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

/// Reduced row echelon form; zero rows are dropped.
Rref rref(const Matrix& m);

struct LinearBasis {
  std::size_t rank = 0;
  std::vector<Vec> nullspace_basis;  // primitive integer vectors, one per free column
  bool row_independent = true;
};

LinearBasis linear_basis(const Matrix& m);

std::size_t rank_of(const Matrix& m);
std::size_t rank_of(const std::vector<Vec>& rows, std::size_t cols);

/// Some solution of A x = b, or nullopt when inconsistent.
std::optional<Vec> solve_linear(const Matrix& a, std::span<const Rational> b);

/// Orthogonal projection of `v` onto the complement of span(`basis`).
Vec project_out(std::span<const Rational> v, const std::vector<Vec>& basis);

}  // namespace mpeccq
