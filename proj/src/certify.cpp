#include "mpeccq/certify.hpp"

#include <algorithm>

#include "mpeccq/errors.hpp"
#include "mpeccq/linalg.hpp"
#include "mpeccq/lp.hpp"
#include "mpeccq/parallel.hpp"
#include "mpeccq/report.hpp"

namespace mpeccq {

using nlohmann::json;

std::string to_string(CqStatus s) {
  switch (s) {
    case CqStatus::Holds: return "HOLDS";
    case CqStatus::Fails: return "FAILS";
    case CqStatus::Unknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

const Vec* find_vec(const Witness& w, const std::string& name) {
  for (const auto& [k, v] : w)
    if (k == name) return &v;
  return nullptr;
}

namespace {

bool has(const IndexSet& s, std::size_t i) { return std::find(s.begin(), s.end(), i) != s.end(); }

CqVerdict verdict(std::string name, CqStatus status, std::string method) {
  CqVerdict v;
  v.name = std::move(name);
  v.status = status;
  v.method = std::move(method);
  return v;
}

Matrix rows_of(const Matrix& m, const IndexSet& idx) {
  Matrix out(0, m.cols());
  for (auto i : idx) out.append_row(m.row(i));
  return out;
}

// max sum(lambda) over {lambda >= 0 : rows^T lambda = 0, sum <= 1}; returns the maximizer.
Vec abnormal_lp(const Matrix& rows) {
  const std::size_t k = rows.rows();
  LpProblem lp = LpProblem::feasibility(k);
  lp.objective = Vec(k, Rational(1));
  lp.sense = LpSense::Maximize;
  lp.eq = rows.transpose();
  lp.eq_rhs = Vec(rows.cols());
  for (std::size_t i = 0; i < k; ++i) {
    lp.ineq.append_row(scaled(unit(k, i), Rational(-1)));
    lp.ineq_rhs.push_back(0);
  }
  lp.ineq.append_row(Vec(k, Rational(1)));
  lp.ineq_rhs.push_back(1);
  LpOutcome out = lp_solve(lp);
  return out.primal;
}

Vec scatter(const Vec& sub, const IndexSet& idx, std::size_t n) {
  Vec out(n);
  for (std::size_t i = 0; i < idx.size(); ++i) out[idx[i]] = sub[i];
  return out;
}

std::vector<Vec> identity_basis(std::size_t n) {
  std::vector<Vec> b;
  for (std::size_t i = 0; i < n; ++i) b.push_back(unit(n, i));
  return b;
}

std::string sign_name(QuadSign s) {
  switch (s) {
    case QuadSign::Positive: return "POSITIVE";
    case QuadSign::Witness: return "WITNESS";
    case QuadSign::Unknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

}  // namespace

json to_json(const CqVerdict& v) {
  json j;
  j["name"] = v.name;
  j["status"] = to_string(v.status);
  j["method"] = v.method;
  j["scope"] = v.scope;
  json w = json::object();
  for (const auto& [k, x] : v.witness) w[k] = vec_json(x);
  j["witness"] = w;
  j["certificate"] = v.certificate.is_null() ? json::object() : v.certificate;
  j["reason"] = v.reason;
  json pre = json::array();
  for (const auto& p : v.prerequisites) pre.push_back(to_json(p));
  j["prerequisites"] = pre;
  json steps = json::array();
  for (const auto& s : v.steps) steps.push_back(to_json(s));
  j["steps"] = steps;
  j["detail"] = v.detail.is_null() ? json::object() : v.detail;
  return j;
}

IndexSet system_active(const InequalitySystem& sys, std::span<const Rational> z) {
  if (z.size() != sys.dim) throw Error(ErrorCode::DimensionMismatch, "point has wrong length");
  IndexSet out;
  for (std::size_t i = 0; i < sys.rows.size(); ++i) {
    Rational v = sys.rows[i].evaluate(z);
    if (sgn(v) > 0)
      throw Error(ErrorCode::InfeasiblePoint, "row " + std::to_string(i + 1) + " is " + to_string(v) + " > 0");
    if (sgn(v) == 0) out.push_back(i);
  }
  return out;
}

Matrix system_jacobian(const InequalitySystem& sys, std::span<const Rational> z) {
  Matrix j(0, sys.dim);
  for (const auto& r : sys.rows) j.append_row(r.gradient(z));
  return j;
}

PolyCone linearized_cone(const InequalitySystem& sys, std::span<const Rational> z) {
  IndexSet act = system_active(sys, z);
  return PolyCone::from_hrep(rows_of(system_jacobian(sys, z), act), Matrix(0, sys.dim));
}

CqVerdict nnamcq_check(const InequalitySystem& sys, std::span<const Rational> z) {
  IndexSet act = system_active(sys, z);
  Matrix ja = rows_of(system_jacobian(sys, z), act);
  CqVerdict out = verdict("NNAMCQ", CqStatus::Holds, "NNAMCQ");
  if (!act.empty()) {
    Vec lam = abnormal_lp(ja);
    if (!mpeccq::is_zero(lam)) {
      out.status = CqStatus::Fails;
      out.witness.emplace_back("lambda", primitive(scatter(lam, act, sys.rows.size())));
      return out;
    }
  }
  // Gordan alternative: a direction with grad P_i d <= -1 on the active rows.
  LpProblem lp = LpProblem::feasibility(sys.dim);
  lp.ineq = ja;
  lp.ineq_rhs = Vec(act.size(), Rational(-1));
  LpOutcome d = lp_solve(lp);
  out.certificate = {{"active", index_json(act)}, {"mfcq_direction", vec_json(d.primal)}};
  return out;
}

CqVerdict foscms_check(const InequalitySystem& sys, std::span<const Rational> z) {
  IndexSet act = system_active(sys, z);
  Matrix jac = system_jacobian(sys, z);
  CqVerdict out = verdict("FOSCMS", CqStatus::Holds, "FOSCMS");
  PolyCone t = PolyCone::from_hrep(rows_of(jac, act), Matrix(0, sys.dim));
  if (t.is_zero()) {
    out.certificate = {{"kind", "STRONG_SUBREG"}};
    return out;
  }
  const std::size_t k = act.size();
  if (k > 20) {
    out.status = CqStatus::Unknown;
    out.reason = "too many active rows for face enumeration";
    return out;
  }
  std::size_t faces = 0;
  for (std::size_t mask = (std::size_t{1} << k); mask-- > 1;) {
    IndexSet tight, loose;
    for (std::size_t i = 0; i < k; ++i) (((mask >> i) & 1) ? tight : loose).push_back(act[i]);
    Matrix jt = rows_of(jac, tight);
    Vec w;
    if (loose.empty()) {
      auto lb = linear_basis(jt);
      if (lb.nullspace_basis.empty()) continue;
      w = lb.nullspace_basis.front();
    } else {
      // max s : J_T w = 0, J_L w + s <= 0, s <= 1
      const std::size_t n = sys.dim + 1;
      LpProblem lp = LpProblem::feasibility(n);
      lp.objective = unit(n, sys.dim);
      lp.sense = LpSense::Maximize;
      for (auto i : tight) {
        Vec r = jac.row_vec(i);
        r.push_back(0);
        lp.eq.append_row(r);
        lp.eq_rhs.push_back(0);
      }
      for (auto i : loose) {
        Vec r = jac.row_vec(i);
        r.push_back(1);
        lp.ineq.append_row(r);
        lp.ineq_rhs.push_back(0);
      }
      lp.ineq.append_row(unit(n, sys.dim));
      lp.ineq_rhs.push_back(1);
      LpOutcome o = lp_solve(lp);
      if (o.status != LpStatus::Optimal || sgn(o.value) <= 0) continue;
      w.assign(o.primal.begin(), o.primal.begin() + static_cast<long>(sys.dim));
    }
    ++faces;
    Vec lam = abnormal_lp(jt);
    if (!mpeccq::is_zero(lam)) {
      out.status = CqStatus::Fails;
      out.witness.emplace_back("w", primitive(w));
      out.witness.emplace_back("lambda", primitive(scatter(lam, tight, sys.rows.size())));
      return out;
    }
  }
  out.certificate = {{"faces_checked", faces}};
  return out;
}

CqVerdict soscms_check(const InequalitySystem& sys, std::span<const Rational> z, unsigned depth) {
  IndexSet act = system_active(sys, z);
  const std::size_t s = sys.rows.size();
  Matrix jac = system_jacobian(sys, z);
  Matrix ineq(0, s), eq = jac.transpose();
  for (std::size_t i = 0; i < s; ++i) {
    if (has(act, i))
      ineq.append_row(scaled(unit(s, i), Rational(-1)));
    else
      eq.append_row(unit(s, i));
  }
  PolyCone a = PolyCone::from_hrep(ineq, eq);
  CqVerdict out = verdict("SOSCMS", CqStatus::Holds, "SOSCMS");
  if (a.is_zero()) {
    out.method = "NNAMCQ";
    out.certificate = {{"abnormal_cone", "trivial"}};
    return out;
  }
  PolyCone t = PolyCone::from_hrep(rows_of(jac, act), Matrix(0, sys.dim));
  json per_ray = json::array();
  bool unknown = false;
  for (const auto& lam : a.rays()) {
    Matrix h(sys.dim, sys.dim);
    for (std::size_t i = 0; i < s; ++i) {
      if (sgn(lam[i]) == 0) continue;
      Matrix hi = sys.rows[i].hessian(z);
      for (std::size_t r = 0; r < sys.dim; ++r)
        for (std::size_t c = 0; c < sys.dim; ++c) h(r, c) -= lam[i] * hi(r, c);
    }
    QuadFormQuery q{h, t.rays(), t.lineality(), identity_basis(sys.dim), depth};
    QuadFormResult r = quadratic_form_sign_on_cone(q);
    per_ray.push_back({{"lambda", vec_json(lam)}, {"sign", sign_name(r.sign)}, {"cells", r.cells}});
    if (r.sign == QuadSign::Witness) {
      out.status = CqStatus::Fails;
      out.witness.emplace_back("lambda", lam);
      out.witness.emplace_back("w", r.witness);
      out.detail = {{"rays", per_ray}};
      return out;
    }
    if (r.sign == QuadSign::Unknown) unknown = true;
  }
  out.detail = {{"rays", per_ray}};
  if (unknown) {
    out.status = CqStatus::Unknown;
    out.reason = "subdivision depth exhausted";
  } else {
    out.certificate = {{"abnormal_rays", vecs_json(a.rays())}};
  }
  return out;
}

CqVerdict mscq_cascade(const InequalitySystem& sys, std::span<const Rational> z, unsigned depth) {
  IndexSet act = system_active(sys, z);
  CqVerdict out = verdict("MSCQ", CqStatus::Unknown, "");
  bool affine = std::all_of(sys.rows.begin(), sys.rows.end(), [](const Poly& p) { return p.is_affine(); });
  if (affine) {
    out.status = CqStatus::Holds;
    out.method = "LINEAR";
    out.certificate = {{"kind", "LINEAR"}, {"active", index_json(act)}};
    return out;
  }
  for (auto* check : {+[](const InequalitySystem& s, std::span<const Rational> p, unsigned) { return nnamcq_check(s, p); },
                      +[](const InequalitySystem& s, std::span<const Rational> p, unsigned) { return foscms_check(s, p); },
                      +[](const InequalitySystem& s, std::span<const Rational> p, unsigned d) {
                        return soscms_check(s, p, d);
                      }}) {
    CqVerdict step = check(sys, z, depth);
    out.steps.push_back(step);
    if (step.status == CqStatus::Holds) {
      out.status = CqStatus::Holds;
      out.method = step.name;
      out.certificate = step.certificate;
      return out;
    }
  }
  out.reason = "no sufficient condition certified; failures of NNAMCQ, FOSCMS or SOSCMS do not refute MSCQ";
  return out;
}

InequalitySystem lower_system(const MpecProblem& p) { return {p.m, p.g_in_y()}; }

InequalitySystem upper_system(const MpecProblem& p) { return {p.n + p.m, p.G}; }

CqVerdict nondeg_g_check(const MpecProblem& p) {
  Vec pt = p.point();
  IndexSet ig = system_active(upper_system(p), pt);
  Matrix gx = p.jac_G_x(), gy = p.jac_G_y();
  Matrix ineq(0, p.p), eq = gx.transpose();
  for (std::size_t k = 0; k < p.p; ++k) {
    if (has(ig, k))
      ineq.append_row(scaled(unit(p.p, k), Rational(-1)));
    else
      eq.append_row(unit(p.p, k));
  }
  PolyCone cone = PolyCone::from_hrep(ineq, eq);
  CqVerdict out = verdict("NONDEG_G", CqStatus::Holds, "GENERATORS");
  Matrix gyt = gy.transpose();
  for (const auto& eta : cone.rays()) {
    if (!mpeccq::is_zero(gyt.multiply(eta))) {
      out.status = CqStatus::Fails;
      out.witness.emplace_back("eta", eta);
      return out;
    }
  }
  out.certificate = {{"generators", vecs_json(cone.rays())}};
  return out;
}

Matrix phase_one_form(const MpecProblem& p, std::span<const Rational> lambda) {
  const std::size_t m = p.m, d = p.m + p.p;
  Matrix a = p.jac_phi_y(), h = p.hess_lambda_g(lambda, p.y), gy = p.jac_G_y();
  Matrix q(d, d);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) q(i, j) = (a(i, j) + a(j, i)) / 2 + (h(i, j) + h(j, i)) / 2;
  for (std::size_t k = 0; k < p.p; ++k)
    for (std::size_t i = 0; i < m; ++i) {
      q(i, m + k) = -gy(k, i) / 2;
      q(m + k, i) = -gy(k, i) / 2;
    }
  return q;
}

namespace {

// C(lambda) in (w, eta) with eta supported on `support`.
PolyCone phase_one_cone(const MpecProblem& p, std::span<const Rational> lambda, const IndexSet& support) {
  const std::size_t m = p.m, d = p.m + p.p;
  Matrix grad = p.grad_g(p.y), fx = p.jac_phi_x(), gx = p.jac_G_x();
  Matrix ineq(0, d), eq(0, d);
  for (auto i : strict_support(lambda)) {
    Vec r(d);
    for (std::size_t j = 0; j < m; ++j) r[j] = grad(i, j);
    eq.append_row(r);
  }
  for (std::size_t k = 0; k < p.p; ++k) {
    if (has(support, k))
      ineq.append_row(scaled(unit(d, m + k), Rational(-1)));
    else
      eq.append_row(unit(d, m + k));
  }
  for (std::size_t j = 0; j < p.n; ++j) {
    Vec r(d);
    for (std::size_t i = 0; i < m; ++i) r[i] = fx(i, j);
    for (std::size_t k = 0; k < p.p; ++k) r[m + k] = -gx(k, j);
    eq.append_row(r);
  }
  return PolyCone::from_hrep(ineq, eq);
}

QuadFormResult phase_one_check(const MpecProblem& p, std::span<const Rational> lambda, const IndexSet& support,
                               unsigned depth) {
  PolyCone c = phase_one_cone(p, lambda, support);
  std::vector<Vec> wbasis;
  for (std::size_t i = 0; i < p.m; ++i) wbasis.push_back(unit(p.m + p.p, i));
  return quadratic_form_sign_on_cone({phase_one_form(p, lambda), c.rays(), c.lineality(), wbasis, depth});
}

std::vector<IndexSet> subsets(const IndexSet& s) {
  std::vector<IndexSet> out;
  for (std::size_t mask = (std::size_t{1} << s.size()); mask-- > 0;) {
    IndexSet sub;
    for (std::size_t i = 0; i < s.size(); ++i)
      if ((mask >> i) & 1) sub.push_back(s[i]);
    out.push_back(std::move(sub));
  }
  return out;
}

}  // namespace

WitnessReport verify_witness(const MpecProblem& p, const MpecWitness& t) {
  WitnessReport r;
  if (t.u.size() != p.n || t.v.size() != p.m || t.lambda.size() != p.q || t.eta.size() != p.p || t.w.size() != p.m) {
    r.notes.push_back("tuple has wrong lengths");
    return r;
  }
  r.uv_nonzero = !mpeccq::is_zero(t.u) || !mpeccq::is_zero(t.v);
  r.w_nonzero = !mpeccq::is_zero(t.w);
  Vec ystar = p.ystar();
  MultiplierSet ms = multiplier_set(p, p.y, ystar);
  r.lambda_extreme = std::find(ms.extreme.begin(), ms.extreme.end(), t.lambda) != ms.extreme.end();
  if (!r.lambda_extreme) r.notes.push_back("lambda is not an extreme multiplier");

  IndexSet ig = system_active(upper_system(p), p.point());
  Matrix gx = p.jac_G_x(), gy = p.jac_G_y();
  Vec dg = add(gx.multiply(t.u), gy.multiply(t.v));
  r.ms1 = std::all_of(ig.begin(), ig.end(), [&](std::size_t k) { return sgn(dg[k]) <= 0; });

  if (!ms.empty()) {
    CriticalConeData k = critical_cone(p, p.y, ystar);
    if (k.cone().contains(t.v)) {
      try {
        DirectionalMultiplierData dm = directional_multipliers(p, p.y, ystar, t.v);
        r.lambda_directional = dm.face.contains(t.lambda);
      } catch (const Error& e) {
        r.notes.push_back(e.what());
      }
      Vec vstar = sub(scaled(p.jac_phi_x().multiply(t.u), Rational(-1)), p.jac_phi_y().multiply(t.v));
      r.ms2 = graph_tangent_member(p, p.y, ystar, t.v, vstar).member;
    } else {
      r.notes.push_back("v is not in the critical cone");
    }
  }

  bool eta_ok = true;
  for (std::size_t k = 0; k < p.p; ++k) {
    if (sgn(t.eta[k]) < 0) eta_ok = false;
    if (!has(ig, k) && sgn(t.eta[k]) != 0) eta_ok = false;
  }
  Vec lhs = p.jac_phi_x().transpose().multiply(t.w);
  Vec rhs = gx.transpose().multiply(t.eta);
  r.ms3 = eta_ok && lhs == rhs && sgn(dot(t.eta, dg)) == 0;

  Matrix grad = p.grad_g(p.y);
  bool w_in_w = true;
  for (auto i : strict_support(t.lambda))
    if (sgn(dot(grad.row(i), t.w)) != 0) w_in_w = false;
  r.psi = quad_value(phase_one_form(p, t.lambda), concat(t.w, t.eta));
  r.ms4 = w_in_w && sgn(r.psi) <= 0;
  return r;
}

CqVerdict certify_mscq_mpec(const MpecProblem& p, const CertifyOptions& opts) {
  p.check();
  FeasibilityReport fr = validate_point(p);
  if (!fr.g_feasible || !fr.G_feasible) {
    std::string msg = "the point is not feasible";
    for (const auto& m : fr.messages) msg += "; " + m;
    throw Error(ErrorCode::PrerequisiteFailed, msg);
  }
  if (!fr.multiplier_feasible) throw Error(ErrorCode::NoMultiplier, "no lower-level multiplier at the point");

  CqVerdict out = verdict("MSCQ_MPEC", CqStatus::Unknown, "");
  CqVerdict lower = mscq_cascade(lower_system(p), p.y, opts.depth);
  lower.name = "lower_level_mscq";
  CqVerdict upper = mscq_cascade(upper_system(p), p.point(), opts.depth);
  upper.name = "upper_level_mscq";
  CqVerdict nondeg = nondeg_g_check(p);
  nondeg.name = "nondeg_g";
  out.prerequisites = {lower, upper, nondeg};
  for (const auto& pre : out.prerequisites)
    if (pre.status != CqStatus::Holds) {
      out.method = "PREREQUISITES";
      out.reason = "prerequisite " + pre.name + " is " + to_string(pre.status);
      return out;
    }

  Vec ystar = p.ystar();
  MultiplierSet ms = multiplier_set(p, p.y, ystar);
  const std::vector<Vec>& ext = ms.extreme;
  IndexSet ig = system_active(upper_system(p), p.point());
  unsigned threads = resolve_threads(opts.threads);

  std::function<QuadFormResult(std::size_t)> phase1 = [&](std::size_t i) {
    return phase_one_check(p, ext[i], ig, opts.depth);
  };
  std::vector<QuadFormResult> first = parallel_map(ext.size(), threads, phase1);
  json p1 = json::array();
  bool all_positive = true;
  for (std::size_t i = 0; i < ext.size(); ++i) {
    json e = {{"lambda", vec_json(ext[i])}, {"sign", sign_name(first[i].sign)}, {"cells", first[i].cells}};
    if (first[i].sign == QuadSign::Witness) e["witness"] = vec_json(first[i].witness);
    p1.push_back(e);
    if (first[i].sign != QuadSign::Positive) all_positive = false;
  }
  out.detail["phase_one"] = p1;
  if (all_positive) {
    out.status = CqStatus::Holds;
    out.method = "PHASE_I";
    out.certificate = {{"extreme_multipliers", vecs_json(ext)}, {"phase_one", p1}};
    return out;
  }

  // Phase II: cells (lambda, J, lambda', A); linear part by generators, the rest checked by verify_witness.
  const std::size_t n = p.n, m = p.m, q = p.q, d = n + m + q;
  Matrix grad = p.grad_g(p.y), fx = p.jac_phi_x(), fy = p.jac_phi_y(), gx = p.jac_G_x(), gy = p.jac_G_y();
  std::size_t cells = 0;
  bool overflow = false;
  for (const auto& lam : ext) {
    IndexSet plus = strict_support(lam), rest;
    for (auto i : ms.active)
      if (!has(plus, i)) rest.push_back(i);
    for (const auto& j : subsets(ig)) {
      QuadFormResult wr = phase_one_check(p, lam, j, opts.depth);
      if (wr.sign != QuadSign::Witness) continue;
      Vec w(wr.witness.begin(), wr.witness.begin() + static_cast<long>(m));
      Vec eta(wr.witness.begin() + static_cast<long>(m), wr.witness.end());
      for (const auto& lam2 : ext) {
        Matrix h = p.hess_lambda_g(lam2, p.y);
        for (const auto& a : subsets(rest)) {
          if (++cells > opts.cell_limit) {
            overflow = true;
            break;
          }
          Matrix ineq(0, d), eq(0, d);
          for (auto k : ig) {
            Vec r(d);
            for (std::size_t c = 0; c < n; ++c) r[c] = gx(k, c);
            for (std::size_t c = 0; c < m; ++c) r[n + c] = gy(k, c);
            (has(j, k) ? eq : ineq).append_row(r);
          }
          Vec ys(d);
          for (std::size_t c = 0; c < m; ++c) ys[n + c] = ystar[c];
          eq.append_row(ys);
          for (auto i : ms.active) {
            Vec r(d);
            for (std::size_t c = 0; c < m; ++c) r[n + c] = grad(i, c);
            (has(plus, i) || has(a, i) ? eq : ineq).append_row(r);
          }
          // -phi_x u - phi_y v - H v - grad^T mu = 0
          for (std::size_t row = 0; row < m; ++row) {
            Vec r(d);
            for (std::size_t c = 0; c < n; ++c) r[c] = -fx(row, c);
            for (std::size_t c = 0; c < m; ++c) r[n + c] = -fy(row, c) - h(row, c);
            for (std::size_t i = 0; i < q; ++i) r[n + m + i] = -grad(i, row);
            eq.append_row(r);
          }
          for (std::size_t i = 0; i < q; ++i) {
            if (has(plus, i)) continue;
            if (has(a, i))
              ineq.append_row(scaled(unit(d, n + m + i), Rational(-1)));
            else
              eq.append_row(unit(d, n + m + i));
          }
          PolyCone cell = PolyCone::from_hrep(ineq, eq);
          std::vector<Vec> cands;
          Vec sum(d);
          for (const auto& r : cell.rays()) {
            cands.push_back(r);
            sum = add(sum, r);
          }
          for (const auto& l : cell.lineality()) {
            cands.push_back(l);
            cands.push_back(scaled(l, Rational(-1)));
          }
          if (cell.rays().size() > 1) cands.push_back(sum);
          for (const auto& l : cell.lineality()) {
            if (cell.rays().empty()) break;
            cands.push_back(add(sum, l));
            cands.push_back(sub(sum, l));
          }
          for (const auto& c : cands) {
            MpecWitness t{Vec(c.begin(), c.begin() + static_cast<long>(n)),
                          Vec(c.begin() + static_cast<long>(n), c.begin() + static_cast<long>(n + m)), lam, eta, w};
            if (mpeccq::is_zero(t.u) && mpeccq::is_zero(t.v)) continue;
            Vec uv = primitive(concat(t.u, t.v));
            t.u.assign(uv.begin(), uv.begin() + static_cast<long>(n));
            t.v.assign(uv.begin() + static_cast<long>(n), uv.end());
            if (verify_witness(p, t).ok()) {
              out.status = CqStatus::Fails;
              out.method = "PHASE_II";
              out.scope = "sufficient condition";
              out.witness = {{"u", t.u}, {"v", t.v}, {"lambda", t.lambda}, {"eta", t.eta}, {"w", t.w}};
              out.detail["phase_two_cells"] = cells;
              return out;
            }
          }
        }
        if (overflow) break;
      }
      if (overflow) break;
    }
    if (overflow) break;
  }
  out.detail["phase_two_cells"] = cells;
  out.method = "PHASE_II";
  out.reason = overflow ? "cell limit reached without a verified witness"
                        : "Phase I is inconclusive and no witness of the sufficient condition was found";
  return out;
}

}  // namespace mpeccq
