#include "mpeccq/linalg.hpp"

#include "mpeccq/errors.hpp"

namespace mpeccq {

Rref rref(const Matrix& m) {
  Matrix a = m;
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t p = r;
    while (p < a.rows() && sgn(a(p, c)) == 0) ++p;
    if (p == a.rows()) continue;
    if (p != r)
      for (std::size_t j = 0; j < a.cols(); ++j) swap(a(p, j), a(r, j));
    Rational inv = 1 / a(r, c);
    for (std::size_t j = c; j < a.cols(); ++j) a(r, j) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == r || sgn(a(i, c)) == 0) continue;
      Rational f = a(i, c);
      for (std::size_t j = c; j < a.cols(); ++j)
        if (sgn(a(r, j)) != 0) a(i, j) -= f * a(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  Matrix reduced(0, a.cols());
  for (std::size_t i = 0; i < r; ++i) reduced.append_row(a.row(i));
  return {std::move(reduced), std::move(pivots)};
}

LinearBasis linear_basis(const Matrix& m) {
  Rref rr = rref(m);
  LinearBasis out;
  out.rank = rr.pivots.size();
  out.row_independent = out.rank == m.rows();
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : rr.pivots) is_pivot[p] = true;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vec v(m.cols());
    v[f] = 1;
    for (std::size_t i = 0; i < rr.pivots.size(); ++i) v[rr.pivots[i]] = -rr.reduced(i, f);
    out.nullspace_basis.push_back(primitive(v));
  }
  return out;
}

std::size_t rank_of(const Matrix& m) { return rref(m).pivots.size(); }

std::size_t rank_of(const std::vector<Vec>& rows, std::size_t cols) {
  return rank_of(Matrix::from_rows(rows, cols));
}

std::optional<Vec> solve_linear(const Matrix& a, std::span<const Rational> b) {
  if (b.size() != a.rows()) throw Error(ErrorCode::DimensionMismatch, "rhs size mismatch");
  Matrix aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  Rref rr = rref(aug);
  Vec x(a.cols());
  for (std::size_t i = 0; i < rr.pivots.size(); ++i) {
    if (rr.pivots[i] == a.cols()) return std::nullopt;
    x[rr.pivots[i]] = rr.reduced(i, a.cols());
  }
  return x;
}

Vec project_out(std::span<const Rational> v, const std::vector<Vec>& basis) {
  Vec r(v.begin(), v.end());
  if (basis.empty()) return r;
  // Solve the normal equations (B B^T) c = B v and subtract B^T c.
  std::size_t k = basis.size();
  Matrix gram(k, k);
  Vec rhs(k);
  for (std::size_t i = 0; i < k; ++i) {
    rhs[i] = dot(basis[i], v);
    for (std::size_t j = 0; j < k; ++j) gram(i, j) = dot(basis[i], basis[j]);
  }
  auto c = solve_linear(gram, rhs);
  if (!c) throw Error(ErrorCode::DimensionMismatch, "projection onto a degenerate basis");
  for (std::size_t i = 0; i < k; ++i) axpy(r, -(*c)[i], basis[i]);
  return r;
}

}  // namespace mpeccq
