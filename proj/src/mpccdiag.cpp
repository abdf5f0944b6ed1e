#include "mpeccq/mpccdiag.hpp"

#include <algorithm>

#include "mpeccq/errors.hpp"
#include "mpeccq/linalg.hpp"
#include "mpeccq/lp.hpp"

namespace mpeccq {

namespace {

bool has(const IndexSet& s, std::size_t i) { return std::find(s.begin(), s.end(), i) != s.end(); }

struct Grads {
  std::size_t n, m, q, p, N;
  Matrix h, g, G;  // gradients in (x, y, l) at the point
  Vec z;
};

Grads gradients(const MpecProblem& p, const MpccPoint& pt) {
  MpccSystem sys = build_mpcc(p);
  Grads gr{p.n, p.m, p.q, p.p, p.n + p.m + p.q, Matrix(0, p.n + p.m + p.q), Matrix(0, p.n + p.m + p.q),
           Matrix(0, p.n + p.m + p.q), concat(concat(pt.x, pt.y), pt.lambda)};
  for (const auto& f : sys.h) gr.h.append_row(f.gradient(gr.z));
  for (const auto& f : sys.g) gr.g.append_row(f.gradient(gr.z));
  for (const auto& f : sys.G) gr.G.append_row(f.gradient(gr.z));
  return gr;
}

Vec lam_unit(const Grads& gr, std::size_t i) { return unit(gr.N, gr.n + gr.m + i); }

CqVerdict make(std::string name, CqStatus s, std::string method) {
  CqVerdict v;
  v.name = std::move(name);
  v.status = s;
  v.method = std::move(method);
  return v;
}

// Rank test on a family of rows; FAILS carries coefficients of a vanishing combination.
CqVerdict independence(std::string name, const Matrix& rows) {
  CqVerdict v = make(std::move(name), CqStatus::Holds, "RANK");
  if (rows.rows() == 0) return v;
  LinearBasis lb = linear_basis(rows.transpose());
  v.certificate = {{"rank", lb.rank}, {"rows", rows.rows()}};
  if (!lb.nullspace_basis.empty()) {
    v.status = CqStatus::Fails;
    v.witness.emplace_back("coefficients", lb.nullspace_basis.front());
  }
  return v;
}

// A multiplier different from lambda, if Lambda has one.
std::optional<Vec> other_multiplier(const MpecProblem& p, std::span<const Rational> lambda) {
  MultiplierSet ms = multiplier_set(p, p.y, p.ystar());
  if (ms.empty()) return std::nullopt;
  Vec lam(lambda.begin(), lambda.end());
  std::vector<Vec> cands{min_norm_multiplier(p, p.y, p.ystar())};
  for (const auto& v : ms.extreme) cands.push_back(v);
  for (const auto& r : ms.lambda.vrep().rays) cands.push_back(add(lam, r));
  for (const auto& c : cands)
    if (c != lam) return c;
  return std::nullopt;
}

}  // namespace

MpccPoint mpcc_index_sets(const MpecProblem& p, std::span<const Rational> lambda) {
  p.check();
  if (lambda.size() != p.q)
    throw Error(ErrorCode::DimensionMismatch,
                "multiplier has length " + std::to_string(lambda.size()) + ", expected " + std::to_string(p.q));
  MpccPoint pt;
  pt.x = p.x;
  pt.y = p.y;
  pt.lambda.assign(lambda.begin(), lambda.end());
  Vec gv = p.g_at(p.y);
  for (std::size_t i = 0; i < p.q; ++i) {
    if (sgn(gv[i]) > 0) throw Error(ErrorCode::InfeasiblePoint, "g" + std::to_string(i + 1) + "(y) > 0");
    if (sgn(lambda[i]) < 0) throw Error(ErrorCode::InfeasiblePoint, "lambda" + std::to_string(i + 1) + " < 0");
    bool active = sgn(gv[i]) == 0, positive = sgn(lambda[i]) > 0;
    if (active && positive)
      pt.Ig.push_back(i);
    else if (!active && !positive)
      pt.Ilambda.push_back(i);
    else if (active)
      pt.I0.push_back(i);
    else
      throw Error(ErrorCode::InfeasiblePoint, "complementarity fails at index " + std::to_string(i + 1));
  }
  Vec ys = p.grad_g(p.y).transpose().multiply(lambda);
  if (ys != p.ystar()) throw Error(ErrorCode::InfeasiblePoint, "phi + grad g^T lambda is not zero");
  Vec Gv = p.G_at();
  for (std::size_t k = 0; k < p.p; ++k) {
    if (sgn(Gv[k]) > 0) throw Error(ErrorCode::InfeasiblePoint, "G" + std::to_string(k + 1) + " > 0");
    if (sgn(Gv[k]) == 0) pt.IG.push_back(k);
  }
  return pt;
}

Uniqueness multiplier_uniqueness(const MpecProblem& p) {
  MultiplierSet ms = multiplier_set(p, p.y, p.ystar());
  if (ms.empty()) throw Error(ErrorCode::NoMultiplier, "the multiplier set is empty");
  Uniqueness u;
  const auto& vr = ms.lambda.vrep();
  u.unique = vr.vertices.size() == 1 && vr.rays.empty() && vr.lineality.empty();
  if (!u.unique) {
    Vec base = min_norm_multiplier(p, p.y, p.ystar());
    for (const auto& v : vr.vertices)
      if (v != base) {
        u.second = v;
        break;
      }
    if (!u.second && !vr.rays.empty()) u.second = add(base, vr.rays.front());
  }
  return u;
}

std::vector<Branch> branches(const MpccPoint& pt) {
  std::vector<Branch> out;
  const std::size_t k = pt.I0.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
    Branch b;
    for (std::size_t i = 0; i < k; ++i) (((mask >> i) & 1) ? b.beta2 : b.beta1).push_back(pt.I0[i]);
    out.push_back(std::move(b));
  }
  return out;
}

MfcqReport mpcc_mfcq_check(const MpecProblem& p, std::span<const Rational> lambda) {
  MfcqReport rep;
  rep.point = mpcc_index_sets(p, lambda);
  const MpccPoint& pt = rep.point;
  Grads gr = gradients(p, pt);
  rep.branch_list = branches(pt);

  Matrix fam = gr.h;
  for (std::size_t i = 0; i < p.q; ++i)
    if (has(pt.Ig, i) || has(pt.I0, i)) fam.append_row(gr.g.row(i));
  for (std::size_t i = 0; i < p.q; ++i)
    if (has(pt.Ilambda, i) || has(pt.I0, i)) fam.append_row(lam_unit(gr, i));
  rep.gradient_independence = independence("MPCC_MFCQ_INDEPENDENCE", fam);

  std::optional<Vec> other = other_multiplier(p, lambda);
  if (other) {
    rep.fast_path = true;
    Vec diff = sub(*other, pt.lambda);
    for (std::size_t b = 0; b < rep.branch_list.size(); ++b) {
      CqVerdict v = make("branch_" + std::to_string(b + 1), CqStatus::Fails, "SECOND_MULTIPLIER");
      v.witness.emplace_back("lambda_difference", diff);
      v.witness.emplace_back("second_multiplier", *other);
      rep.branch_verdicts.push_back(v);
    }
    return rep;
  }

  for (std::size_t b = 0; b < rep.branch_list.size(); ++b) {
    const Branch& br = rep.branch_list[b];
    CqVerdict v = make("branch_" + std::to_string(b + 1), CqStatus::Holds, "MFCQ");
    Matrix eq = gr.h, act(0, gr.N);
    for (std::size_t i = 0; i < p.q; ++i) {
      if (has(pt.Ig, i) || has(br.beta1, i)) eq.append_row(gr.g.row(i));
      if (has(pt.Ilambda, i) || has(br.beta2, i)) eq.append_row(lam_unit(gr, i));
      if (has(br.beta1, i)) act.append_row(scaled(lam_unit(gr, i), Rational(-1)));
      if (has(br.beta2, i)) act.append_row(gr.g.row(i));
    }
    for (auto k : pt.IG) act.append_row(gr.G.row(k));
    CqVerdict ind = independence("equalities", eq);
    if (ind.status == CqStatus::Fails) {
      v.status = CqStatus::Fails;
      v.method = "EQUALITY_DEPENDENCE";
      v.witness = ind.witness;
      rep.branch_verdicts.push_back(v);
      continue;
    }
    // max s : eq d = 0, act d + s <= 0, s <= 1
    const std::size_t nv = gr.N + 1;
    LpProblem lp = LpProblem::feasibility(nv);
    lp.objective = unit(nv, gr.N);
    lp.sense = LpSense::Maximize;
    for (std::size_t r = 0; r < eq.rows(); ++r) {
      Vec row = eq.row_vec(r);
      row.push_back(0);
      lp.eq.append_row(row);
      lp.eq_rhs.push_back(0);
    }
    for (std::size_t r = 0; r < act.rows(); ++r) {
      Vec row = act.row_vec(r);
      row.push_back(1);
      lp.ineq.append_row(row);
      lp.ineq_rhs.push_back(0);
    }
    lp.ineq.append_row(unit(nv, gr.N));
    lp.ineq_rhs.push_back(1);
    LpOutcome o = lp_solve(lp);
    if (act.rows() == 0 || (o.status == LpStatus::Optimal && sgn(o.value) > 0)) {
      Vec d(o.primal.begin(), o.primal.begin() + static_cast<long>(gr.N));
      v.certificate = {{"direction", nlohmann::json::array()}};
      for (const auto& x : d) v.certificate["direction"].push_back(to_string(x));
    } else {
      // abnormal multipliers: eq^T r_E + act^T r_A = 0, r_A >= 0, sum r_A = 1
      const std::size_t ne = eq.rows(), na = act.rows();
      LpProblem ab = LpProblem::feasibility(ne + na);
      Matrix stacked = eq;
      stacked.append_rows(act);
      ab.eq = stacked.transpose();
      ab.eq_rhs = Vec(gr.N);
      Vec sum(ne + na);
      for (std::size_t i = 0; i < na; ++i) {
        sum[ne + i] = 1;
        ab.ineq.append_row(scaled(unit(ne + na, ne + i), Rational(-1)));
        ab.ineq_rhs.push_back(0);
      }
      ab.eq.append_row(sum);
      ab.eq_rhs.push_back(1);
      LpOutcome w = lp_solve(ab);
      v.status = CqStatus::Fails;
      v.method = "ABNORMAL_MULTIPLIER";
      v.witness.emplace_back("multiplier", primitive(w.primal));
    }
    rep.branch_verdicts.push_back(v);
  }
  return rep;
}

CqVerdict mpcc_licq_check(const MpecProblem& p, std::span<const Rational> lambda) {
  MpccPoint pt = mpcc_index_sets(p, lambda);
  if (auto other = other_multiplier(p, lambda)) {
    CqVerdict v = make("MPCC_LICQ", CqStatus::Fails, "SECOND_MULTIPLIER");
    v.witness.emplace_back("lambda_difference", sub(*other, pt.lambda));
    return v;
  }
  Grads gr = gradients(p, pt);
  Matrix fam = gr.h;
  for (std::size_t i = 0; i < p.q; ++i)
    if (has(pt.Ig, i) || has(pt.I0, i)) fam.append_row(gr.g.row(i));
  for (std::size_t i = 0; i < p.q; ++i)
    if (has(pt.Ilambda, i) || has(pt.I0, i)) fam.append_row(lam_unit(gr, i));
  for (auto k : pt.IG) fam.append_row(gr.G.row(k));
  return independence("MPCC_LICQ", fam);
}

DisjunctiveSet mpec_linearized_cone(const MpecProblem& p, std::span<const Rational> lambda) {
  MpccPoint pt = mpcc_index_sets(p, lambda);
  const std::size_t n = p.n, m = p.m, q = p.q, N = n + m + q;
  Matrix fx = p.jac_phi_x(), fy = p.jac_phi_y(), h = p.hess_lambda_g(lambda, p.y), grad = p.grad_g(p.y);
  Matrix gx = p.jac_G_x(), gy = p.jac_G_y();
  auto v_row = [&](std::size_t i) {
    Vec r(N);
    for (std::size_t c = 0; c < m; ++c) r[n + c] = grad(i, c);
    return r;
  };
  Matrix base_eq(0, N), base_in(0, N);
  for (std::size_t j = 0; j < m; ++j) {
    Vec r(N);
    for (std::size_t c = 0; c < n; ++c) r[c] = fx(j, c);
    for (std::size_t c = 0; c < m; ++c) r[n + c] = fy(j, c) + h(j, c);
    for (std::size_t i = 0; i < q; ++i) r[n + m + i] = grad(i, j);
    base_eq.append_row(r);
  }
  for (auto i : pt.Ig) base_eq.append_row(v_row(i));
  for (auto i : pt.Ilambda) base_eq.append_row(unit(N, n + m + i));
  for (auto k : pt.IG) {
    Vec r(N);
    for (std::size_t c = 0; c < n; ++c) r[c] = gx(k, c);
    for (std::size_t c = 0; c < m; ++c) r[n + c] = gy(k, c);
    base_in.append_row(r);
  }
  DisjunctiveSet out;
  out.dim = N;
  for (const auto& br : branches(pt)) {
    Matrix eq = base_eq, in = base_in;
    for (auto i : br.beta1) {
      eq.append_row(v_row(i));
      in.append_row(scaled(unit(N, n + m + i), Rational(-1)));
    }
    for (auto i : br.beta2) {
      in.append_row(v_row(i));
      eq.append_row(unit(N, n + m + i));
    }
    Vec bi(in.rows()), be(eq.rows());
    out.pieces.emplace_back(in, bi, eq, be);
  }
  return out;
}

namespace {

struct StationaritySystem {
  std::size_t m, q, p, K;
  Matrix eq;  // N x K coefficient rows, plus fixings
  Vec eq_rhs;
  Matrix ineq;
  Vec ineq_rhs;
};

// Columns: alpha (m), nu (q), delta (q), zeta (p).
StationaritySystem weak_system(const MpecProblem& p, const MpccPoint& pt) {
  if (!p.F) throw Error(ErrorCode::MissingObjective, "stationarity needs an objective F");
  Grads gr = gradients(p, pt);
  const std::size_t m = p.m, q = p.q, pp = p.p, K = m + 2 * q + pp;
  Vec gradF = p.F->gradient(concat(pt.x, pt.y));
  gradF.resize(gr.N);
  StationaritySystem s{m, q, pp, K, Matrix(0, K), Vec{}, Matrix(0, K), Vec{}};
  for (std::size_t r = 0; r < gr.N; ++r) {
    Vec row(K);
    for (std::size_t j = 0; j < m; ++j) row[j] = gr.h(j, r);
    for (std::size_t i = 0; i < q; ++i) {
      row[m + i] = gr.g(i, r);
      row[m + q + i] = r == gr.n + gr.m + i ? Rational(-1) : Rational(0);
    }
    for (std::size_t k = 0; k < pp; ++k) row[m + 2 * q + k] = gr.G(k, r);
    s.eq.append_row(row);
    s.eq_rhs.push_back(-gradF[r]);
  }
  for (std::size_t i = 0; i < q; ++i) {
    if (has(pt.Ilambda, i)) {
      s.eq.append_row(unit(K, m + i));
      s.eq_rhs.push_back(0);
    }
    if (has(pt.Ig, i)) {
      s.eq.append_row(unit(K, m + q + i));
      s.eq_rhs.push_back(0);
    }
  }
  for (std::size_t k = 0; k < pp; ++k) {
    if (has(pt.IG, k)) {
      s.ineq.append_row(scaled(unit(K, m + 2 * q + k), Rational(-1)));
      s.ineq_rhs.push_back(0);
    } else {
      s.eq.append_row(unit(K, m + 2 * q + k));
      s.eq_rhs.push_back(0);
    }
  }
  return s;
}

Witness split(const StationaritySystem& s, const Vec& x) {
  auto part = [&](std::size_t from, std::size_t len) {
    return Vec(x.begin() + static_cast<long>(from), x.begin() + static_cast<long>(from + len));
  };
  return {{"alpha", part(0, s.m)},
          {"nu", part(s.m, s.q)},
          {"delta", part(s.m + s.q, s.q)},
          {"zeta", part(s.m + 2 * s.q, s.p)}};
}

}  // namespace

StationarityResult stationarity_check(const MpecProblem& p, std::span<const Rational> lambda, StationarityMode mode) {
  if (!p.F) throw Error(ErrorCode::MissingObjective, "stationarity needs an objective F");
  MpccPoint pt = mpcc_index_sets(p, lambda);
  StationaritySystem s = weak_system(p, pt);
  StationarityResult out;
  const std::size_t cases = mode == StationarityMode::Weak ? 1 : [&] {
    std::size_t c = 1;
    for (std::size_t i = 0; i < pt.I0.size(); ++i) c *= 3;
    return c;
  }();
  for (std::size_t code = 0; code < cases; ++code) {
    LpProblem lp = LpProblem::feasibility(s.K);
    lp.eq = s.eq;
    lp.eq_rhs = s.eq_rhs;
    lp.ineq = s.ineq;
    lp.ineq_rhs = s.ineq_rhs;
    std::size_t c = code;
    if (mode == StationarityMode::Mordukhovich)
      for (auto i : pt.I0) {
        std::size_t which = c % 3;
        c /= 3;
        if (which == 0) {
          lp.ineq.append_row(scaled(unit(s.K, s.m + i), Rational(-1)));
          lp.ineq_rhs.push_back(0);
          lp.ineq.append_row(scaled(unit(s.K, s.m + s.q + i), Rational(-1)));
          lp.ineq_rhs.push_back(0);
        } else {
          lp.eq.append_row(unit(s.K, which == 1 ? s.m + i : s.m + s.q + i));
          lp.eq_rhs.push_back(0);
        }
      }
    ++out.cases;
    LpOutcome o = lp_solve(lp);
    if (o.status == LpStatus::Optimal) {
      out.feasible = true;
      out.multipliers = split(s, o.primal);
      return out;
    }
  }
  return out;
}

bool stationarity_multipliers_valid(const MpecProblem& p, std::span<const Rational> lambda, StationarityMode mode,
                                    const Witness& mult) {
  MpccPoint pt = mpcc_index_sets(p, lambda);
  StationaritySystem s = weak_system(p, pt);
  Vec x;
  for (const char* name : {"alpha", "nu", "delta", "zeta"}) {
    const Vec* v = find_vec(mult, name);
    if (!v) return false;
    x.insert(x.end(), v->begin(), v->end());
  }
  if (x.size() != s.K) return false;
  if (s.eq.multiply(x) != s.eq_rhs) return false;
  Vec in = s.ineq.multiply(x);
  for (std::size_t i = 0; i < in.size(); ++i)
    if (in[i] > s.ineq_rhs[i]) return false;
  if (mode == StationarityMode::Mordukhovich)
    for (auto i : pt.I0) {
      const Rational& nu = x[s.m + i];
      const Rational& de = x[s.m + s.q + i];
      if (!(sgn(nu) == 0 || sgn(de) == 0 || (sgn(nu) > 0 && sgn(de) > 0))) return false;
    }
  return true;
}

GcqEvidence gcq_evidence(const MpecProblem& p, std::span<const Rational> lambda, std::span<const Rational> d,
                         const ProbeOptions& opts, double threshold, const std::optional<Polyhedron>& expected) {
  DisjunctiveSet lin = mpec_linearized_cone(p, lambda);
  if (d.size() != lin.dim)
    throw Error(ErrorCode::DimensionMismatch, "direction must have length n+m+q = " + std::to_string(lin.dim));
  if (!lin.contains(d))
    throw Error(ErrorCode::DirectionNotInLinCone, to_string(d) + " is not in the MPEC linearized cone");
  GcqEvidence ev;
  ev.threshold = threshold;
  Vec base = concat(concat(p.x, p.y), Vec(lambda.begin(), lambda.end()));
  ev.probe = mpcc_ratio_probe(p, base, d, opts);
  bool away = !ev.probe.ratio.empty() &&
              std::all_of(ev.probe.ratio.begin(), ev.probe.ratio.end(), [&](double r) { return r >= threshold; });
  ev.tag = away ? "GACQ_VIOLATION_EVIDENCE" : "NO_EVIDENCE";
  if (expected) ev.in_expected_tangent_cone = expected->contains(d);
  return ev;
}

}  // namespace mpeccq
