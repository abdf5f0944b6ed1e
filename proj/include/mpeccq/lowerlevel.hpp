#pragma once

#include <optional>
#include <vector>

#include "mpeccq/polyhedra.hpp"
#include "mpeccq/problem.hpp"

namespace mpeccq {

using IndexSet = std::vector<std::size_t>;

/// I(y) = {i : g_i(y) = 0}; throws INFEASIBLE_POINT when some g_i(y) > 0.
IndexSet active_set(const MpecProblem& p, std::span<const Rational> y);
/// I+(lambda) = {i : lambda_i > 0}.
IndexSet strict_support(std::span<const Rational> lambda);

/// Lambda(y, y*) = {lambda >= 0 : grad g(y)^T lambda = y*, lambda_i = 0 off I(y)} and its vertices E(y, y*).
struct MultiplierSet {
  Vec y, ystar;
  IndexSet active;
  Polyhedron lambda;  // canonical H-rep
  std::vector<Vec> extreme;
  Vec farkas;  // certificate of emptiness over the rows [eq; ineq] when empty

  bool empty() const { return lambda.empty(); }
};

MultiplierSet multiplier_set(const MpecProblem& p, std::span<const Rational> y, std::span<const Rational> ystar);

/// K(y, y*) in its two H-representations.
struct CriticalConeData {
  PolyCone via_tangent;     // grad g_I v <= 0, v . y* = 0
  PolyCone via_multiplier;  // grad g_i v = 0 for lambda_i > 0, <= 0 for the other active rows
  Vec lambda;
  bool representations_agree = false;

  const PolyCone& cone() const { return via_tangent; }
};

/// Uses the minimal-norm multiplier when `lambda` is absent. Throws NO_MULTIPLIER if Lambda is empty.
CriticalConeData critical_cone(const MpecProblem& p, std::span<const Rational> y, std::span<const Rational> ystar,
                               const std::optional<Vec>& lambda = std::nullopt);

struct DirectionalMultiplierData {
  Vec v;
  Rational theta;
  Polyhedron face;
  std::vector<Vec> face_vertices;
};

/// Maximizes lambda -> v^T hess(lambda^T g)(y) v over Lambda.
/// Throws DIRECTION_NOT_CRITICAL if v is not in K, LP_UNBOUNDED if the maximum is +infinity.
DirectionalMultiplierData directional_multipliers(const MpecProblem& p, std::span<const Rational> y,
                                                  std::span<const Rational> ystar, std::span<const Rational> v);

/// {grad g(y)^T mu : mu^T grad g(y) v = 0, mu in T_{N(g(y))}(lambda)}.
PolyCone critical_normal_cone(const MpecProblem& p, std::span<const Rational> y, std::span<const Rational> ystar,
                              std::span<const Rational> v, std::span<const Rational> lambda);

/// T(v) = {v* : exists lambda in Lambda(y,y*;v), v* in hess(lambda^T g)(y) v + N_K(v)}.
struct GraphSlice {
  bool empty = true;
  bool theta_unbounded = false;
  Polyhedron set;
};

GraphSlice graph_tangent_slice(const MpecProblem& p, std::span<const Rational> y, std::span<const Rational> ystar,
                               std::span<const Rational> v);

struct TangentMembership {
  bool member = false;
  Vec lambda, mu;
};

TangentMembership graph_tangent_member(const MpecProblem& p, std::span<const Rational> y,
                                       std::span<const Rational> ystar, std::span<const Rational> v,
                                       std::span<const Rational> vstar);

/// l1-minimal multiplier; ties broken by lexicographic maximum, which selects a vertex.
Vec min_norm_multiplier(const MpecProblem& p, std::span<const Rational> y, std::span<const Rational> ystar);

/// Restricts Lambda to {lambda : c . lambda = value}.
Polyhedron with_equation(const Polyhedron& base, std::span<const Rational> c, const Rational& value);

}  // namespace mpeccq
