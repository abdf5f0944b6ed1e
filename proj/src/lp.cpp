#include "mpeccq/lp.hpp"

#include <optional>

#include "mpeccq/errors.hpp"
#include "mpeccq/linalg.hpp"

namespace mpeccq {

std::string_view to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "OPTIMAL";
    case LpStatus::Infeasible: return "INFEASIBLE";
    case LpStatus::Unbounded: return "UNBOUNDED";
  }
  return "UNKNOWN";
}

LpProblem LpProblem::feasibility(std::size_t n) {
  LpProblem p;
  p.objective = Vec(n);
  p.ineq = Matrix(0, n);
  p.eq = Matrix(0, n);
  return p;
}

namespace {

// Standard form: min cost·z, rows·z = rhs (rhs >= 0), z >= 0.
// Column layout: [x+ (n) | x- (n) | slack (m1) | artificial (m)].
struct Tableau {
  std::size_t n = 0, m1 = 0, m = 0, cols = 0, first_art = 0;
  Matrix t;                       // m x (cols + 1), last column is rhs
  Vec obj;                        // reduced costs, last entry is -value
  std::vector<std::size_t> basis; // basic column per row
  std::vector<int> sigma;         // +1 / -1 row flip
  Matrix original;                // m x cols, standard-form columns before pivoting

  void pivot(std::size_t r, std::size_t c) {
    Rational inv = 1 / t(r, c);
    for (std::size_t j = 0; j <= cols; ++j)
      if (sgn(t(r, j)) != 0) t(r, j) *= inv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || sgn(t(i, c)) == 0) continue;
      Rational f = t(i, c);
      for (std::size_t j = 0; j <= cols; ++j)
        if (sgn(t(r, j)) != 0) t(i, j) -= f * t(r, j);
    }
    if (sgn(obj[c]) != 0) {
      Rational f = obj[c];
      for (std::size_t j = 0; j <= cols; ++j)
        if (sgn(t(r, j)) != 0) obj[j] -= f * t(r, j);
    }
    basis[r] = c;
  }

  void set_costs(const Vec& cost) {
    obj = Vec(cols + 1);
    for (std::size_t j = 0; j < cols; ++j) obj[j] = cost[j];
    for (std::size_t i = 0; i < m; ++i) {
      const Rational& cb = cost[basis[i]];
      if (sgn(cb) == 0) continue;
      for (std::size_t j = 0; j <= cols; ++j)
        if (sgn(t(i, j)) != 0) obj[j] -= cb * t(i, j);
    }
  }

  // Returns entering column with no positive entry on unboundedness, nullopt at optimum.
  std::optional<std::size_t> run(std::size_t allowed_cols) {
    while (true) {
      std::size_t enter = cols;
      for (std::size_t j = 0; j < allowed_cols; ++j)
        if (sgn(obj[j]) < 0) {
          enter = j;
          break;
        }
      if (enter == cols) return std::nullopt;
      std::size_t leave = m;
      Rational best;
      for (std::size_t i = 0; i < m; ++i) {
        if (sgn(t(i, enter)) <= 0) continue;
        Rational ratio = t(i, cols) / t(i, enter);
        if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m) return enter;
      pivot(leave, enter);
    }
  }

  // Simplex multipliers y solving B^T y = cost_B on the standard-form rows.
  Vec multipliers(const Vec& cost) const {
    Matrix bt(m, m);
    Vec cb(m);
    for (std::size_t i = 0; i < m; ++i) {
      cb[i] = cost[basis[i]];
      for (std::size_t k = 0; k < m; ++k) bt(i, k) = original(k, basis[i]);
    }
    auto y = solve_linear(bt, cb);
    if (!y) throw Error(ErrorCode::DimensionMismatch, "singular simplex basis");
    return *y;
  }

  Vec primal_x() const {
    Vec z(cols);
    for (std::size_t i = 0; i < m; ++i) z[basis[i]] = t(i, cols);
    Vec x(n);
    for (std::size_t j = 0; j < n; ++j) x[j] = z[j] - z[n + j];
    return x;
  }
};

void check_shapes(const LpProblem& p) {
  std::size_t n = p.num_vars();
  if (p.ineq.cols() != n || p.eq.cols() != n)
    throw Error(ErrorCode::DimensionMismatch, "constraint matrices must have " + std::to_string(n) + " columns");
  if (p.ineq_rhs.size() != p.ineq.rows() || p.eq_rhs.size() != p.eq.rows())
    throw Error(ErrorCode::DimensionMismatch, "right-hand side length mismatch");
}

Vec max_costs(const LpProblem& p) {
  return p.sense == LpSense::Maximize ? p.objective : scaled(p.objective, Rational(-1));
}

}  // namespace

LpOutcome lp_solve(const LpProblem& p) {
  check_shapes(p);
  Tableau tb;
  tb.n = p.num_vars();
  tb.m1 = p.ineq.rows();
  tb.m = tb.m1 + p.eq.rows();
  tb.first_art = 2 * tb.n + tb.m1;
  tb.cols = tb.first_art + tb.m;
  tb.t = Matrix(tb.m, tb.cols + 1);
  tb.original = Matrix(tb.m, tb.cols);
  tb.sigma.assign(tb.m, 1);
  tb.basis.resize(tb.m);
  for (std::size_t i = 0; i < tb.m; ++i) {
    bool is_ineq = i < tb.m1;
    auto row = is_ineq ? p.ineq.row(i) : p.eq.row(i - tb.m1);
    const Rational& rhs = is_ineq ? p.ineq_rhs[i] : p.eq_rhs[i - tb.m1];
    int s = sgn(rhs) < 0 ? -1 : 1;
    tb.sigma[i] = s;
    for (std::size_t j = 0; j < tb.n; ++j) {
      tb.original(i, j) = s * row[j];
      tb.original(i, tb.n + j) = -s * row[j];
    }
    if (is_ineq) tb.original(i, 2 * tb.n + i) = s;
    tb.original(i, tb.first_art + i) = 1;
    for (std::size_t j = 0; j < tb.cols; ++j) tb.t(i, j) = tb.original(i, j);
    tb.t(i, tb.cols) = s * rhs;
    tb.basis[i] = tb.first_art + i;
  }

  LpOutcome out;
  Vec phase1(tb.cols);
  for (std::size_t i = 0; i < tb.m; ++i) phase1[tb.first_art + i] = 1;
  tb.set_costs(phase1);
  tb.run(tb.cols);
  if (sgn(tb.obj[tb.cols]) != 0) {
    Vec y = tb.multipliers(phase1);
    Vec f(tb.m);
    for (std::size_t i = 0; i < tb.m; ++i) f[i] = -tb.sigma[i] * y[i];
    f = primitive(f);
    out.status = LpStatus::Infeasible;
    out.farkas_ineq.assign(f.begin(), f.begin() + static_cast<long>(tb.m1));
    out.farkas_eq.assign(f.begin() + static_cast<long>(tb.m1), f.end());
    return out;
  }
  for (std::size_t i = 0; i < tb.m; ++i) {
    if (tb.basis[i] < tb.first_art) continue;
    for (std::size_t j = 0; j < tb.first_art; ++j)
      if (sgn(tb.t(i, j)) != 0) {
        tb.pivot(i, j);
        break;
      }
  }

  Vec cmax = max_costs(p);
  Vec phase2(tb.cols);
  for (std::size_t j = 0; j < tb.n; ++j) {
    phase2[j] = -cmax[j];
    phase2[tb.n + j] = cmax[j];
  }
  tb.set_costs(phase2);
  auto enter = tb.run(tb.first_art);
  out.primal = tb.primal_x();
  out.value = dot(p.objective, out.primal);
  if (enter) {
    Vec dz(tb.cols);
    dz[*enter] = 1;
    for (std::size_t i = 0; i < tb.m; ++i) dz[tb.basis[i]] -= tb.t(i, *enter);
    Vec r(tb.n);
    for (std::size_t j = 0; j < tb.n; ++j) r[j] = dz[j] - dz[tb.n + j];
    out.status = LpStatus::Unbounded;
    out.ray = primitive(r);
    return out;
  }
  Vec y = tb.multipliers(phase2);
  out.status = LpStatus::Optimal;
  out.dual_ineq.resize(tb.m1);
  out.dual_eq.resize(tb.m - tb.m1);
  for (std::size_t i = 0; i < tb.m; ++i) {
    Rational u = -tb.sigma[i] * y[i];
    if (i < tb.m1)
      out.dual_ineq[i] = u;
    else
      out.dual_eq[i - tb.m1] = u;
  }
  return out;
}

bool verify_certificate(const LpProblem& p, const LpOutcome& out) {
  check_shapes(p);
  std::size_t n = p.num_vars();
  auto primal_ok = [&](const Vec& x) {
    if (x.size() != n) return false;
    Vec ax = p.ineq.multiply(x);
    for (std::size_t i = 0; i < ax.size(); ++i)
      if (ax[i] > p.ineq_rhs[i]) return false;
    return p.eq.multiply(x) == p.eq_rhs;
  };
  auto combo = [&](const Vec& a, const Vec& b) {
    Vec s = p.ineq.transpose().multiply(a);
    return add(s, p.eq.transpose().multiply(b));
  };
  Vec cmax = max_costs(p);
  switch (out.status) {
    case LpStatus::Optimal: {
      if (!primal_ok(out.primal)) return false;
      if (out.dual_ineq.size() != p.ineq.rows() || out.dual_eq.size() != p.eq.rows()) return false;
      for (const auto& u : out.dual_ineq)
        if (sgn(u) < 0) return false;
      if (combo(out.dual_ineq, out.dual_eq) != cmax) return false;
      return dot(p.ineq_rhs, out.dual_ineq) + dot(p.eq_rhs, out.dual_eq) == dot(cmax, out.primal) &&
             out.value == dot(p.objective, out.primal);
    }
    case LpStatus::Infeasible: {
      if (out.farkas_ineq.size() != p.ineq.rows() || out.farkas_eq.size() != p.eq.rows()) return false;
      for (const auto& u : out.farkas_ineq)
        if (sgn(u) < 0) return false;
      if (!is_zero(combo(out.farkas_ineq, out.farkas_eq))) return false;
      return dot(p.ineq_rhs, out.farkas_ineq) + dot(p.eq_rhs, out.farkas_eq) < 0;
    }
    case LpStatus::Unbounded: {
      if (!primal_ok(out.primal) || out.ray.size() != n) return false;
      for (const auto& v : p.ineq.multiply(out.ray))
        if (sgn(v) > 0) return false;
      return is_zero(p.eq.multiply(out.ray)) && sgn(dot(cmax, out.ray)) > 0;
    }
  }
  return false;
}

}  // namespace mpeccq
