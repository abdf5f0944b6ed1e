#include "mpeccq/lowerlevel.hpp"

#include <algorithm>

#include "mpeccq/errors.hpp"
#include "mpeccq/lp.hpp"

namespace mpeccq {

IndexSet active_set(const MpecProblem& p, std::span<const Rational> y) {
  if (y.size() != p.m) throw Error(ErrorCode::DimensionMismatch, "lower-level point has wrong length");
  Vec gv = p.g_at(y);
  IndexSet out;
  for (std::size_t i = 0; i < gv.size(); ++i) {
    if (sgn(gv[i]) > 0)
      throw Error(ErrorCode::InfeasiblePoint, "g" + std::to_string(i + 1) + "(y) = " + gv[i].get_str() + " > 0");
    if (sgn(gv[i]) == 0) out.push_back(i);
  }
  return out;
}

IndexSet strict_support(std::span<const Rational> lambda) {
  IndexSet s;
  for (std::size_t i = 0; i < lambda.size(); ++i)
    if (sgn(lambda[i]) > 0) s.push_back(i);
  return s;
}

namespace {

bool contains_index(const IndexSet& s, std::size_t i) { return std::find(s.begin(), s.end(), i) != s.end(); }

// Raw H-rep of Lambda: -lambda_I <= 0; lambda_i = 0 off I; grad g^T lambda = y*.
LpProblem lambda_lp(const MpecProblem& p, const Matrix& grad, const IndexSet& active, std::span<const Rational> ystar) {
  LpProblem lp = LpProblem::feasibility(p.q);
  lp.eq = grad.transpose();
  lp.eq_rhs.assign(ystar.begin(), ystar.end());
  for (std::size_t i = 0; i < p.q; ++i) {
    if (contains_index(active, i)) {
      lp.ineq.append_row(scaled(unit(p.q, i), Rational(-1)));
      lp.ineq_rhs.push_back(0);
    } else {
      lp.eq.append_row(unit(p.q, i));
      lp.eq_rhs.push_back(0);
    }
  }
  return lp;
}

void require_len(std::span<const Rational> v, std::size_t n, const char* what) {
  if (v.size() != n)
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + " has length " + std::to_string(v.size()) + ", expected " + std::to_string(n));
}

// c_i = v^T hess g_i(y) v
Vec hessian_weights(const MpecProblem& p, std::span<const Rational> y, std::span<const Rational> v) {
  Vec c(p.q);
  for (std::size_t i = 0; i < p.q; ++i) {
    Vec e = unit(p.q, i);
    Matrix h = p.hess_lambda_g(e, y);
    c[i] = dot(v, h.multiply(v));
  }
  return c;
}

// mu-cone: mu_i = 0 off I, mu_i >= 0 on I with i outside `free_set`, and mu . (grad g v) = 0.
PolyCone mu_cone(const MpecProblem& p, const Matrix& grad, const IndexSet& active, const IndexSet& free_set,
                 std::span<const Rational> v) {
  Matrix ineq(0, p.q), eq(0, p.q);
  for (std::size_t i = 0; i < p.q; ++i) {
    if (!contains_index(active, i))
      eq.append_row(unit(p.q, i));
    else if (!contains_index(free_set, i))
      ineq.append_row(scaled(unit(p.q, i), Rational(-1)));
  }
  eq.append_row(grad.multiply(v));
  return PolyCone::from_hrep(std::move(ineq), std::move(eq));
}

}  // namespace

Polyhedron with_equation(const Polyhedron& base, std::span<const Rational> c, const Rational& value) {
  Matrix eq(0, base.dim());
  eq.append_row(c);
  return base.intersect(Polyhedron(Matrix(0, base.dim()), Vec{}, std::move(eq), Vec{value}));
}

MultiplierSet multiplier_set(const MpecProblem& p, std::span<const Rational> y, std::span<const Rational> ystar) {
  require_len(ystar, p.m, "dual point");
  MultiplierSet s;
  s.y.assign(y.begin(), y.end());
  s.ystar.assign(ystar.begin(), ystar.end());
  s.active = active_set(p, y);
  Matrix grad = p.grad_g(y);
  LpProblem lp = lambda_lp(p, grad, s.active, ystar);
  LpOutcome out = lp_solve(lp);
  if (out.status == LpStatus::Infeasible) {
    s.lambda = Polyhedron::empty_set(p.q);
    s.farkas = concat(out.farkas_eq, out.farkas_ineq);
    return s;
  }
  s.lambda = canonical_hrep(Polyhedron(lp.ineq, lp.ineq_rhs, lp.eq, lp.eq_rhs));
  s.extreme = s.lambda.vrep().vertices;
  return s;
}

Vec min_norm_multiplier(const MpecProblem& p, std::span<const Rational> y, std::span<const Rational> ystar) {
  require_len(ystar, p.m, "dual point");
  IndexSet active = active_set(p, y);
  LpProblem lp = lambda_lp(p, p.grad_g(y), active, ystar);
  lp.objective = Vec(p.q, Rational(1));
  lp.sense = LpSense::Minimize;
  LpOutcome out = lp_solve(lp);
  if (out.status != LpStatus::Optimal)
    throw Error(ErrorCode::NoMultiplier, "the multiplier set is empty for y* = " + to_string(ystar));
  lp.eq.append_row(lp.objective);
  lp.eq_rhs.push_back(out.value);
  lp.sense = LpSense::Maximize;
  for (std::size_t i = 0; i < p.q; ++i) {
    lp.objective = unit(p.q, i);
    LpOutcome step = lp_solve(lp);
    lp.eq.append_row(unit(p.q, i));
    lp.eq_rhs.push_back(step.value);
  }
  // All coordinates are now pinned by equalities.
  auto x = lp_solve(lp);
  return x.primal;
}

CriticalConeData critical_cone(const MpecProblem& p, std::span<const Rational> y, std::span<const Rational> ystar,
                               const std::optional<Vec>& lambda) {
  MultiplierSet ms = multiplier_set(p, y, ystar);
  if (ms.empty()) throw Error(ErrorCode::NoMultiplier, "the multiplier set is empty for y* = " + to_string(ystar));
  CriticalConeData d;
  d.lambda = lambda ? *lambda : min_norm_multiplier(p, y, ystar);
  require_len(d.lambda, p.q, "multiplier");
  if (!ms.lambda.contains(d.lambda))
    throw Error(ErrorCode::NoMultiplier, to_string(d.lambda) + " is not in the multiplier set");
  Matrix grad = p.grad_g(y);
  Matrix a_in(0, p.m), a_eq(0, p.m), b_in(0, p.m), b_eq(0, p.m);
  for (std::size_t i : ms.active) {
    a_in.append_row(grad.row(i));
    if (sgn(d.lambda[i]) > 0)
      b_eq.append_row(grad.row(i));
    else
      b_in.append_row(grad.row(i));
  }
  a_eq.append_row(ystar);
  d.via_tangent = PolyCone::from_hrep(std::move(a_in), std::move(a_eq));
  d.via_multiplier = PolyCone::from_hrep(std::move(b_in), std::move(b_eq));
  d.representations_agree = same_set(d.via_tangent, d.via_multiplier);
  return d;
}

DirectionalMultiplierData directional_multipliers(const MpecProblem& p, std::span<const Rational> y,
                                                  std::span<const Rational> ystar, std::span<const Rational> v) {
  require_len(v, p.m, "direction");
  CriticalConeData k = critical_cone(p, y, ystar);
  if (!k.cone().contains(v))
    throw Error(ErrorCode::DirectionNotCritical, to_string(v) + " is not in the critical cone");
  MultiplierSet ms = multiplier_set(p, y, ystar);
  IndexSet active = ms.active;
  LpProblem lp = lambda_lp(p, p.grad_g(y), active, ystar);
  lp.objective = hessian_weights(p, y, v);
  lp.sense = LpSense::Maximize;
  LpOutcome out = lp_solve(lp);
  if (out.status == LpStatus::Unbounded)
    throw Error(ErrorCode::LpUnbounded, "theta is +infinity along " + to_string(v));
  DirectionalMultiplierData d;
  d.v.assign(v.begin(), v.end());
  d.theta = out.value;
  d.face = with_equation(ms.lambda, lp.objective, d.theta);
  d.face_vertices = d.face.vrep().vertices;
  return d;
}

PolyCone critical_normal_cone(const MpecProblem& p, std::span<const Rational> y, std::span<const Rational> ystar,
                              std::span<const Rational> v, std::span<const Rational> lambda) {
  require_len(v, p.m, "direction");
  require_len(lambda, p.q, "multiplier");
  CriticalConeData k = critical_cone(p, y, ystar, Vec(lambda.begin(), lambda.end()));
  if (!k.cone().contains(v))
    throw Error(ErrorCode::DirectionNotCritical, to_string(v) + " is not in the critical cone");
  Matrix grad = p.grad_g(y);
  PolyCone mu = mu_cone(p, grad, active_set(p, y), strict_support(lambda), v);
  return linear_image(mu, grad.transpose());
}

GraphSlice graph_tangent_slice(const MpecProblem& p, std::span<const Rational> y, std::span<const Rational> ystar,
                               std::span<const Rational> v) {
  require_len(v, p.m, "direction");
  GraphSlice s;
  s.set = Polyhedron::empty_set(p.m);
  CriticalConeData k = critical_cone(p, y, ystar);
  if (!k.cone().contains(v)) return s;
  DirectionalMultiplierData dm;
  try {
    dm = directional_multipliers(p, y, ystar, v);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::LpUnbounded) throw;
    s.theta_unbounded = true;
    return s;
  }
  if (dm.face.empty()) return s;
  // N_K(v) does not depend on the multiplier, so any element of Lambda fixes the mu-pattern.
  PolyCone nk = critical_normal_cone(p, y, ystar, v, k.lambda);
  auto hv = [&](const Vec& lam) { return p.hess_lambda_g(lam, y).multiply(v); };
  std::vector<Vec> verts, rays, lin;
  for (const auto& lam : dm.face.vrep().vertices) verts.push_back(hv(lam));
  for (const auto& r : dm.face.vrep().rays) rays.push_back(hv(r));
  for (const auto& l : dm.face.vrep().lineality) lin.push_back(hv(l));
  for (const auto& r : nk.rays()) rays.push_back(r);
  for (const auto& l : nk.lineality()) lin.push_back(l);
  s.set = Polyhedron::from_generators(p.m, verts, rays, lin);
  s.empty = s.set.empty();
  return s;
}

TangentMembership graph_tangent_member(const MpecProblem& p, std::span<const Rational> y,
                                       std::span<const Rational> ystar, std::span<const Rational> v,
                                       std::span<const Rational> vstar) {
  require_len(vstar, p.m, "dual direction");
  TangentMembership r;
  GraphSlice slice = graph_tangent_slice(p, y, ystar, v);
  if (slice.empty) return r;
  DirectionalMultiplierData dm = directional_multipliers(p, y, ystar, v);
  Matrix grad = p.grad_g(y);
  IndexSet active = active_set(p, y);
  const std::size_t q = p.q;

  // Columns of hess(lambda^T g) v, one per lambda_i.
  Matrix hcols(p.m, q);
  for (std::size_t i = 0; i < q; ++i) {
    Vec c = p.hess_lambda_g(unit(q, i), y).multiply(v);
    for (std::size_t a = 0; a < p.m; ++a) hcols(a, i) = c[a];
  }
  Matrix gt = grad.transpose();
  Vec gv = grad.multiply(v);

  auto solve = [&](const IndexSet& free_set, const std::optional<Vec>& fixed_lambda) {
    // Variables (lambda, mu).
    LpProblem lp = LpProblem::feasibility(2 * q);
    auto lift = [&](std::span<const Rational> row, std::size_t off) {
      Vec r(2 * q);
      for (std::size_t i = 0; i < row.size(); ++i) r[off + i] = row[i];
      return r;
    };
    if (fixed_lambda) {
      for (std::size_t i = 0; i < q; ++i) {
        lp.eq.append_row(unit(2 * q, i));
        lp.eq_rhs.push_back((*fixed_lambda)[i]);
      }
    } else {
      for (std::size_t i = 0; i < dm.face.ineq().rows(); ++i) {
        lp.ineq.append_row(lift(dm.face.ineq().row(i), 0));
        lp.ineq_rhs.push_back(dm.face.ineq_rhs()[i]);
      }
      for (std::size_t i = 0; i < dm.face.eq().rows(); ++i) {
        lp.eq.append_row(lift(dm.face.eq().row(i), 0));
        lp.eq_rhs.push_back(dm.face.eq_rhs()[i]);
      }
      for (std::size_t i = 0; i < q; ++i) lp.objective[i] = 1;
    }
    for (std::size_t i = 0; i < q; ++i) {
      if (!contains_index(active, i)) {
        lp.eq.append_row(unit(2 * q, q + i));
        lp.eq_rhs.push_back(0);
      } else if (!contains_index(free_set, i)) {
        lp.ineq.append_row(scaled(unit(2 * q, q + i), Rational(-1)));
        lp.ineq_rhs.push_back(0);
      }
    }
    lp.eq.append_row(lift(gv, q));
    lp.eq_rhs.push_back(0);
    for (std::size_t a = 0; a < p.m; ++a) {
      Vec row = concat(hcols.row(a), gt.row(a));
      lp.eq.append_row(row);
      lp.eq_rhs.push_back(vstar[a]);
    }
    return lp_solve(lp);
  };

  // Maximal support over the face gives the loosest mu-pattern.
  IndexSet maximal;
  for (std::size_t i = 0; i < q; ++i) {
    bool used = false;
    for (const auto* gens : {&dm.face.vrep().vertices, &dm.face.vrep().rays})
      for (const auto& lam : *gens) used = used || sgn(lam[i]) > 0;
    if (used) maximal.push_back(i);
  }
  LpOutcome first = solve(maximal, std::nullopt);
  if (first.status != LpStatus::Optimal) return r;
  Vec lam(first.primal.begin(), first.primal.begin() + static_cast<long>(q));
  LpOutcome second = solve(strict_support(lam), lam);
  if (second.status != LpStatus::Optimal)
    throw Error(ErrorCode::NoMultiplier, "normal-cone representation depends on the multiplier");
  r.member = true;
  r.lambda = lam;
  r.mu.assign(second.primal.begin() + static_cast<long>(q), second.primal.end());
  return r;
}

}  // namespace mpeccq
