#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mpeccq/poly.hpp"

namespace mpeccq {

/// One piece of a piecewise solution map: on {x : region_i(x) <= 0}, y = y(x) and lambda = lambda(x).
struct SolutionPiece {
  std::vector<Expr> region;
  std::vector<Expr> y;
  std::vector<Expr> lambda;
};

/// 0 in phi(x,y) + N_Gamma(y), Gamma = {y : g(y) <= 0}, G(x,y) <= 0, at the point (x, y).
/// All Polys live over x1..xn, y1..ym.
struct MpecProblem {
  std::string name;
  std::size_t n = 0, m = 0, p = 0, q = 0;
  std::vector<Poly> phi, g, G;
  std::optional<Poly> F;
  Vec x, y;
  std::vector<SolutionPiece> solution_map;

  VarSpace vars() const { return VarSpace::problem(n, m); }
  /// (x, y) concatenated.
  Vec point() const { return concat(x, y); }
  Vec point(std::span<const Rational> xx, std::span<const Rational> yy) const { return concat(xx, yy); }
  /// g re-expressed over y1..ym only.
  std::vector<Poly> g_in_y() const;

  Vec phi_at() const;
  /// -phi(x, y): the dual point of the lower-level normal cone.
  Vec ystar() const;
  Vec g_at(std::span<const Rational> yy) const;
  Vec G_at() const;
  /// Rows grad g_i(y) in y-space (q x m).
  Matrix grad_g(std::span<const Rational> yy) const;
  /// sum_i lambda_i hess g_i(y) (m x m).
  Matrix hess_lambda_g(std::span<const Rational> lambda, std::span<const Rational> yy) const;
  Matrix jac_phi_x() const;
  Matrix jac_phi_y() const;
  Matrix jac_G_x() const;
  Matrix jac_G_y() const;

  /// Throws DIMENSION_MISMATCH / UNKNOWN_VARIABLE on inconsistent data.
  void check() const;
};

MpecProblem parse_problem(std::string_view text);
MpecProblem load_problem(const std::string& path);
std::string serialize_problem(const MpecProblem& p);
bool structurally_equal(const MpecProblem& a, const MpecProblem& b);

/// h(x,y,l) = phi(x,y) + grad g(y)^T l over x1..xn, y1..ym, l1..lq; complementarity 0 >= g(y) _|_ -l <= 0.
struct MpccSystem {
  std::size_t n = 0, m = 0, p = 0, q = 0;
  std::vector<Poly> h;
  std::vector<Poly> g;
  std::vector<Poly> G;

  VarSpace vars() const { return VarSpace::problem(n, m, q); }
};

MpccSystem build_mpcc(const MpecProblem& p);

struct FeasibilityReport {
  bool g_feasible = false;
  bool G_feasible = false;
  bool multiplier_feasible = false;
  Vec g_values;
  Vec G_values;
  Vec ystar;
  std::vector<std::string> messages;

  bool ok() const { return g_feasible && G_feasible && multiplier_feasible; }
};

FeasibilityReport validate_point(const MpecProblem& p);

}  // namespace mpeccq
