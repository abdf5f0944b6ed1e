#pragma once

#include <string_view>

#include "mpeccq/matrix.hpp"

namespace mpeccq {

enum class LpSense { Minimize, Maximize };
enum class LpStatus { Optimal, Infeasible, Unbounded };

std::string_view to_string(LpStatus s);

/// optimize objective·x subject to ineq·x <= ineq_rhs, eq·x = eq_rhs; x is free.
struct LpProblem {
  Vec objective;
  Matrix ineq;
  Vec ineq_rhs;
  Matrix eq;
  Vec eq_rhs;
  LpSense sense = LpSense::Minimize;

  std::size_t num_vars() const { return objective.size(); }
  /// Empty constraint blocks sized for `n` variables.
  static LpProblem feasibility(std::size_t n);
};

/// Certified outcome of an exact LP solve.
///
/// Duals refer to the maximization form max c'x with c' = objective (MAX) or
/// -objective (MIN): dual_ineq >= 0 and ineq^T dual_ineq + eq^T dual_eq = c', with
/// ineq_rhs·dual_ineq + eq_rhs·dual_eq = c'·primal at optimality.
/// A Farkas vector (f_ineq >= 0, f_eq free) satisfies ineq^T f_ineq + eq^T f_eq = 0
/// and ineq_rhs·f_ineq + eq_rhs·f_eq < 0. An unbounded ray r has ineq·r <= 0,
/// eq·r = 0 and c'·r > 0.
struct LpOutcome {
  LpStatus status = LpStatus::Infeasible;
  Rational value;  // objective value in the problem's own sense
  Vec primal;
  Vec dual_ineq;
  Vec dual_eq;
  Vec farkas_ineq;
  Vec farkas_eq;
  Vec ray;
};

/// Two-phase dense tableau simplex over exact rationals with Bland's rule.
LpOutcome lp_solve(const LpProblem& p);

/// Re-checks the certificate carried by `out` against `p` exactly.
bool verify_certificate(const LpProblem& p, const LpOutcome& out);

}  // namespace mpeccq
