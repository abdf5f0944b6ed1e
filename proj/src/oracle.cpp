#include "mpeccq/oracle.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "mpeccq/errors.hpp"
#include "mpeccq/lowerlevel.hpp"
#include "mpeccq/parallel.hpp"

namespace mpeccq {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using nlohmann::json;

std::string to_string(ProbeVerdict v) {
  switch (v) {
    case ProbeVerdict::RatioVanishes: return "RATIO_VANISHES";
    case ProbeVerdict::RatioBoundedAway: return "RATIO_BOUNDED_AWAY";
    case ProbeVerdict::Inconclusive: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

json to_json(const ProbeReport& r) {
  return {{"t", r.t},
          {"dist", r.dist},
          {"ratio", r.ratio},
          {"budget_used", r.budget_used},
          {"seed", r.seed},
          {"upper_bound_only", r.upper_bound_only},
          {"verdict", to_string(r.verdict)}};
}

json to_json(const KappaReport& r) {
  return {{"radii", r.radii}, {"max_ratio", r.max_ratio}, {"samples_used", r.used}, {"blowup", r.blowup}};
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFeasTol = 1e-12;

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix(seed ^ splitmix(index + 1)));
}

VectorXd to_eigen(std::span<const double> v) {
  VectorXd out(static_cast<long>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<long>(i)] = v[i];
  return out;
}

VectorXd to_eigen(std::span<const Rational> v) {
  VectorXd out(static_cast<long>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<long>(i)] = v[i].get_d();
  return out;
}

std::vector<double> to_std(const VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

double evalp(const Poly& p, const VectorXd& z) {
  return p.evaluate(std::span<const double>(z.data(), static_cast<std::size_t>(z.size())));
}

// A polynomial family with symbolic first and second derivatives.
struct Family {
  std::size_t nv = 0;
  std::vector<Poly> f;
  std::vector<std::vector<Poly>> d;
  std::vector<std::vector<std::vector<Poly>>> dd;

  Family(std::vector<Poly> polys, std::size_t nvars, bool second) : nv(nvars), f(std::move(polys)) {
    for (const auto& p : f) {
      std::vector<Poly> row;
      std::vector<std::vector<Poly>> h;
      for (std::size_t j = 0; j < nv; ++j) {
        row.push_back(p.differentiate(j));
        if (second) {
          std::vector<Poly> hr;
          for (std::size_t k = 0; k < nv; ++k) hr.push_back(row.back().differentiate(k));
          h.push_back(std::move(hr));
        }
      }
      d.push_back(std::move(row));
      dd.push_back(std::move(h));
    }
  }
  std::size_t size() const { return f.size(); }
  VectorXd value(const VectorXd& z) const {
    VectorXd v(static_cast<long>(f.size()));
    for (std::size_t i = 0; i < f.size(); ++i) v[static_cast<long>(i)] = evalp(f[i], z);
    return v;
  }
  MatrixXd jac(const VectorXd& z) const {
    MatrixXd j(static_cast<long>(f.size()), static_cast<long>(nv));
    for (std::size_t i = 0; i < f.size(); ++i)
      for (std::size_t k = 0; k < nv; ++k) j(static_cast<long>(i), static_cast<long>(k)) = evalp(d[i][k], z);
    return j;
  }
  MatrixXd hess(std::size_t i, const VectorXd& z) const {
    MatrixXd h(static_cast<long>(nv), static_cast<long>(nv));
    for (std::size_t a = 0; a < nv; ++a)
      for (std::size_t b = 0; b < nv; ++b) h(static_cast<long>(a), static_cast<long>(b)) = evalp(dd[i][a][b], z);
    return h;
  }
};

using Fn = std::function<void(const VectorXd&, VectorXd&, MatrixXd&)>;

void restore(const Fn& con, VectorXd& z) {
  VectorXd c;
  MatrixXd cj;
  for (int k = 0; k < 60; ++k) {
    con(z, c, cj);
    if (c.size() == 0 || c.norm() < 1e-14) return;
    VectorXd dz = cj.completeOrthogonalDecomposition().solve(-c);
    if (!dz.allFinite()) return;
    z += dz;
  }
}

// Levenberg-Marquardt on |r(z)|^2 with linearized equality constraints c(z) = 0.
VectorXd solve_ls(const Fn& res, const Fn& con, VectorXd z, int iters = 200) {
  const long n = z.size();
  double mu = 1e-10;
  const double w = 1e6;
  auto merit = [&](const VectorXd& x) {
    VectorXd r, c;
    MatrixXd j, cj;
    res(x, r, j);
    con(x, c, cj);
    double v = r.squaredNorm() + w * c.squaredNorm();
    return std::isfinite(v) ? v : kInf;
  };
  VectorXd r, c;
  MatrixXd j, cj;
  for (int it = 0; it < iters; ++it) {
    res(z, r, j);
    con(z, c, cj);
    double cur = r.squaredNorm() + w * c.squaredNorm();
    if (!std::isfinite(cur) || cur < 1e-32) break;
    const long k = c.size();
    bool accepted = false;
    VectorXd dz;
    for (int tries = 0; tries < 40 && !accepted; ++tries) {
      MatrixXd kk = MatrixXd::Zero(n + k, n + k);
      kk.topLeftCorner(n, n) = j.transpose() * j + mu * MatrixXd::Identity(n, n);
      if (k > 0) {
        kk.topRightCorner(n, k) = cj.transpose();
        kk.bottomLeftCorner(k, n) = cj;
      }
      VectorXd rhs(n + k);
      rhs.head(n) = -j.transpose() * r;
      if (k > 0) rhs.tail(k) = -c;
      dz = kk.completeOrthogonalDecomposition().solve(rhs).head(n);
      if (dz.allFinite() && merit(z + dz) <= cur) {
        z += dz;
        mu = std::max(mu / 3, 1e-14);
        accepted = true;
      } else {
        mu *= 10;
      }
    }
    if (!accepted || dz.norm() <= 1e-16 * (1 + z.norm())) break;
  }
  restore(con, z);
  return z;
}

const Fn kNoConstraint = [](const VectorXd& z, VectorXd& c, MatrixXd& cj) {
  c.resize(0);
  cj.resize(0, z.size());
};

struct Best {
  double dist = kInf;
  VectorXd point;
  std::size_t starts = 0;
};

void take(Best& best, const Best& other) {
  best.starts += other.starts;
  if (other.dist < best.dist) {
    best.dist = other.dist;
    best.point = other.point;
  }
}

ProbeVerdict classify(const std::vector<double>& ratio, double vanish_tol, double away_tol) {
  if (ratio.empty()) return ProbeVerdict::Inconclusive;
  if (ratio.back() < vanish_tol) return ProbeVerdict::RatioVanishes;
  bool away = true;
  for (double r : ratio)
    if (!(r >= away_tol)) away = false;
  return away ? ProbeVerdict::RatioBoundedAway : ProbeVerdict::Inconclusive;
}

// ---- graph of the normal cone ----

Best graph_pattern(const Family& g, const VectorXd& a, const VectorXd& b, const std::vector<int>& state,
                   std::size_t starts, std::uint64_t seed, std::uint64_t index) {
  const long m = a.size();
  const std::size_t q = g.size();
  std::vector<std::size_t> F, E;
  for (std::size_t i = 0; i < q; ++i) {
    if (state[i] == 0) F.push_back(i);
    if (state[i] != 1) E.push_back(i);
  }
  const long nf = static_cast<long>(F.size());
  auto lam_full = [&](const VectorXd& z) {
    VectorXd l = VectorXd::Zero(static_cast<long>(q));
    for (long i = 0; i < nf; ++i) l[static_cast<long>(F[static_cast<std::size_t>(i)])] = z[m + i];
    return l;
  };
  Fn res = [&](const VectorXd& z, VectorXd& r, MatrixXd& j) {
    VectorXd y = z.head(m);
    MatrixXd gj = g.jac(y);
    VectorXd l = lam_full(z);
    r.resize(2 * m);
    r.head(m) = y - a;
    r.tail(m) = gj.transpose() * l - b;
    j = MatrixXd::Zero(2 * m, m + nf);
    j.topLeftCorner(m, m) = MatrixXd::Identity(m, m);
    MatrixXd h = MatrixXd::Zero(m, m);
    for (std::size_t i = 0; i < q; ++i)
      if (l[static_cast<long>(i)] != 0) h += l[static_cast<long>(i)] * g.hess(i, y);
    j.bottomLeftCorner(m, m) = h;
    for (long i = 0; i < nf; ++i) j.block(m, m + i, m, 1) = gj.row(static_cast<long>(F[static_cast<std::size_t>(i)])).transpose();
  };
  Fn con = [&](const VectorXd& z, VectorXd& c, MatrixXd& cj) {
    VectorXd y = z.head(m);
    c.resize(static_cast<long>(E.size()));
    cj = MatrixXd::Zero(static_cast<long>(E.size()), m + nf);
    MatrixXd gj = g.jac(y);
    for (std::size_t k = 0; k < E.size(); ++k) {
      c[static_cast<long>(k)] = evalp(g.f[E[k]], y);
      cj.block(static_cast<long>(k), 0, 1, m) = gj.row(static_cast<long>(E[k]));
    }
  };
  Best best;
  auto rng = stream(seed, index);
  std::normal_distribution<double> normal(0, 1);
  for (std::size_t s = 0; s < starts; ++s) {
    VectorXd z(m + nf);
    if (s == 0) {
      z.head(m) = a;
      if (nf > 0) {
        MatrixXd gf(m, nf);
        MatrixXd gj = g.jac(a);
        for (long i = 0; i < nf; ++i) gf.col(i) = gj.row(static_cast<long>(F[static_cast<std::size_t>(i)])).transpose();
        z.tail(nf) = gf.completeOrthogonalDecomposition().solve(b).cwiseMax(0.0);
      }
    } else {
      double sigma = std::pow(10.0, -static_cast<double>(s % 6)) * (1 + a.norm());
      for (long i = 0; i < m; ++i) z[i] = a[i] + sigma * normal(rng);
      for (long i = 0; i < nf; ++i) z[m + i] = std::abs(normal(rng)) * (1 + b.norm());
    }
    z = solve_ls(res, con, z);
    ++best.starts;
    if (!z.allFinite()) continue;
    VectorXd y = z.head(m);
    VectorXd gv = g.value(y);
    bool ok = true;
    for (std::size_t i = 0; i < q; ++i) {
      double tol = state[i] == 1 ? 0.0 : kFeasTol;
      if (gv[static_cast<long>(i)] > tol) ok = false;
    }
    VectorXd l = lam_full(z);
    for (long i = 0; i < l.size(); ++i) {
      if (l[i] < -kFeasTol) ok = false;
      l[i] = std::max(l[i], 0.0);
    }
    if (!ok) continue;
    VectorXd ys = g.jac(y).transpose() * l;
    double d = std::sqrt((y - a).squaredNorm() + (ys - b).squaredNorm());
    if (d < best.dist) {
      best.dist = d;
      best.point.resize(2 * m);
      best.point << y, ys;
    }
  }
  return best;
}

// ---- projection onto the multiplier polyhedron ----

VectorXd project_polyhedron(const Polyhedron& poly, const VectorXd& x0) {
  const long n = x0.size();
  if (n == 0) return x0;
  const Matrix& in = poly.ineq();
  const Matrix& eq = poly.eq();
  MatrixXd ae(static_cast<long>(eq.rows()), n);
  VectorXd be(static_cast<long>(eq.rows()));
  for (std::size_t i = 0; i < eq.rows(); ++i) {
    for (long j = 0; j < n; ++j) ae(static_cast<long>(i), j) = eq(i, static_cast<std::size_t>(j)).get_d();
    be[static_cast<long>(i)] = poly.eq_rhs()[i].get_d();
  }
  std::vector<VectorXd> rows;
  std::vector<double> rhs;
  for (std::size_t i = 0; i < in.rows(); ++i) {
    VectorXd r(n);
    for (long j = 0; j < n; ++j) r[j] = in(i, static_cast<std::size_t>(j)).get_d();
    rows.push_back(r);
    rhs.push_back(poly.ineq_rhs()[i].get_d());
  }
  Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod;
  if (ae.rows() > 0) cod.compute(ae);
  auto proj_affine = [&](const VectorXd& x) -> VectorXd {
    if (ae.rows() == 0) return x;
    return x - cod.solve(ae * x - be);
  };
  const std::size_t k = rows.size() + 1;
  std::vector<VectorXd> corr(k, VectorXd::Zero(n));
  VectorXd x = x0;
  for (int it = 0; it < 20000; ++it) {
    VectorXd before = x;
    for (std::size_t s = 0; s < k; ++s) {
      VectorXd y = x + corr[s];
      VectorXd p;
      if (s == 0) {
        p = proj_affine(y);
      } else {
        const VectorXd& a = rows[s - 1];
        double viol = a.dot(y) - rhs[s - 1];
        p = viol > 0 ? VectorXd(y - viol / a.squaredNorm() * a) : y;
      }
      corr[s] = y - p;
      x = p;
    }
    if ((x - before).norm() < 1e-16) break;
  }
  return x;
}

// ---- solution-map search ----

struct PieceEval {
  const MpecProblem& p;
  const VectorXd& z;  // (x, y) or (x, y, lambda)
  bool with_lambda;

  double operator()(const SolutionPiece& pc, const VectorXd& xp) const {
    std::span<const double> xs(xp.data(), static_cast<std::size_t>(xp.size()));
    for (const auto& e : pc.region) {
      double v = e.evaluate(xs);
      if (!(v <= 0)) return kInf;
    }
    const long n = static_cast<long>(p.n), m = static_cast<long>(p.m);
    double s = (xp - z.head(n)).squaredNorm();
    for (long j = 0; j < m; ++j) {
      double yj = pc.y[static_cast<std::size_t>(j)].evaluate(xs);
      s += (yj - z[n + j]) * (yj - z[n + j]);
    }
    if (with_lambda)
      for (std::size_t i = 0; i < p.q; ++i) {
        double li = pc.lambda[i].evaluate(xs);
        double d = li - z[n + m + static_cast<long>(i)];
        s += d * d;
      }
    return std::isfinite(s) ? std::sqrt(s) : kInf;
  }
};

Best search_piece(const PieceEval& f, const SolutionPiece& pc, const VectorXd& center, double radius,
                  std::size_t samples, std::uint64_t seed, std::uint64_t index, std::size_t grid_total) {
  const long n = center.size();
  Best best;
  if (n == 0) {
    best.dist = f(pc, center);
    best.point = center;
    return best;
  }
  long k = static_cast<long>(std::floor(std::pow(static_cast<double>(grid_total), 1.0 / static_cast<double>(n))));
  k = std::clamp<long>(k, 3, 201);
  if (k % 2 == 0) --k;
  std::vector<std::pair<double, VectorXd>> top;
  auto consider = [&](const VectorXd& xp) {
    double d = f(pc, xp);
    ++best.starts;
    if (!std::isfinite(d)) return;
    top.emplace_back(d, xp);
    std::sort(top.begin(), top.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    if (top.size() > 5) top.pop_back();
  };
  std::vector<long> idx(static_cast<std::size_t>(n), 0);
  while (true) {
    VectorXd xp(n);
    for (long j = 0; j < n; ++j)
      xp[j] = center[j] + radius * (2.0 * static_cast<double>(idx[static_cast<std::size_t>(j)]) / static_cast<double>(k - 1) - 1);
    consider(xp);
    long j = 0;
    while (j < n && ++idx[static_cast<std::size_t>(j)] == k) idx[static_cast<std::size_t>(j++)] = 0;
    if (j == n) break;
  }
  auto rng = stream(seed, index);
  std::uniform_real_distribution<double> uni(-1, 1);
  for (std::size_t s = 0; s < samples; ++s) {
    VectorXd xp(n);
    for (long j = 0; j < n; ++j) xp[j] = center[j] + radius * uni(rng);
    consider(xp);
  }
  std::vector<VectorXd> dirs;
  for (long a = 0; a < n; ++a) {
    VectorXd e = VectorXd::Zero(n);
    e[a] = 1;
    dirs.push_back(e);
    dirs.push_back(-e);
    for (long b = a + 1; b < n; ++b)
      for (double sa : {1.0, -1.0})
        for (double sb : {1.0, -1.0}) {
          VectorXd d = VectorXd::Zero(n);
          d[a] = sa;
          d[b] = sb;
          dirs.push_back(d);
        }
  }
  for (auto [d0, x0] : top) {
    double h = 2 * radius / static_cast<double>(k - 1);
    double cur = d0;
    VectorXd x = x0;
    for (int evals = 0; h > 1e-17 * (1 + x.norm()) && evals < 20000;) {
      bool moved = false;
      for (const auto& d : dirs) {
        VectorXd xn = x + h * d;
        double v = f(pc, xn);
        ++evals;
        if (v < cur) {
          cur = v;
          x = xn;
          moved = true;
          break;
        }
      }
      if (!moved) h /= 2;
    }
    if (cur < best.dist) {
      best.dist = cur;
      best.point = x;
    }
  }
  return best;
}

// Penalty multistart over (x, y, lambda); only an upper bound when the end point is nearly feasible.
Best penalty_search(const MpecProblem& p, const VectorXd& z, bool with_lambda, std::size_t budget,
                    std::uint64_t seed) {
  MpccSystem sys = build_mpcc(p);
  const long nv = static_cast<long>(p.n + p.m + p.q);
  const long nxy = static_cast<long>(p.n + p.m);
  const long nz = z.size();
  auto raw = [&](const VectorXd& w, double s) {
    std::vector<double> r;
    for (long i = 0; i < nz; ++i) r.push_back(w[i] - z[i]);
    auto val = [&](const Poly& f) { return evalp(f, w); };
    for (const auto& h : sys.h) r.push_back(s * val(h));
    for (std::size_t i = 0; i < p.q; ++i) {
      double gi = val(sys.g[i]);
      double li = w[nxy + static_cast<long>(i)];
      r.push_back(s * std::max(gi, 0.0));
      r.push_back(s * std::max(-li, 0.0));
      r.push_back(s * gi * li);
    }
    for (const auto& g : sys.G) r.push_back(s * std::max(val(g), 0.0));
    return to_eigen(std::span<const double>(r));
  };
  Best best;
  auto rng = stream(seed, 7);
  std::normal_distribution<double> normal(0, 1);
  std::size_t starts = std::max<std::size_t>(1, std::min<std::size_t>(budget, 20));
  for (std::size_t s = 0; s < starts; ++s) {
    VectorXd w(nv);
    w.head(nz) = z;
    if (nz < nv) w.tail(nv - nz).setZero();
    if (s > 0)
      for (long i = 0; i < nv; ++i) w[i] += 0.1 * normal(rng);
    for (double rho : {1e2, 1e4, 1e6, 1e8}) {
      double sc = std::sqrt(rho);
      Fn res = [&](const VectorXd& x, VectorXd& r, MatrixXd& j) {
        r = raw(x, sc);
        j.resize(r.size(), nv);
        for (long c = 0; c < nv; ++c) {
          double h = 1e-7 * (1 + std::abs(x[c]));
          VectorXd xp = x, xm = x;
          xp[c] += h;
          xm[c] -= h;
          j.col(c) = (raw(xp, sc) - raw(xm, sc)) / (2 * h);
        }
      };
      w = solve_ls(res, kNoConstraint, w, 100);
    }
    ++best.starts;
    VectorXd r = raw(w, 1.0);
    double viol = r.tail(r.size() - nz).norm();
    if (viol > 1e-6) continue;
    double d = (w.head(nz) - z).norm();
    if (d < best.dist) {
      best.dist = d;
      best.point = w.head(nz);
    }
  }
  (void)with_lambda;
  return best;
}

DistResult feasible_set_distance(const MpecProblem& p, const VectorXd& z, bool with_lambda, std::size_t budget,
                                 std::uint64_t seed, std::size_t grid_total) {
  const long n = static_cast<long>(p.n), m = static_cast<long>(p.m);
  VectorXd fiber(z.size());
  fiber.head(n) = to_eigen(p.x);
  fiber.segment(n, m) = to_eigen(p.y);
  if (with_lambda) {
    MultiplierSet ms = multiplier_set(p, p.y, p.ystar());
    VectorXd lam = z.tail(static_cast<long>(p.q));
    fiber.tail(static_cast<long>(p.q)) = ms.empty() ? lam : project_polyhedron(ms.lambda, lam);
  }
  Best best;
  best.dist = (fiber - z).norm();
  best.point = fiber;
  best.starts = 1;
  DistResult out;
  if (p.solution_map.empty()) {
    Best pen = penalty_search(p, z, with_lambda, budget, seed);
    take(best, pen);
    out.penalty_fallback = true;
  } else {
    PieceEval f{p, z, with_lambda};
    double radius = std::max(best.dist, 1e-300);
    VectorXd center = z.head(n);
    std::size_t per = budget / std::max<std::size_t>(1, p.solution_map.size());
    for (std::size_t k = 0; k < p.solution_map.size(); ++k) {
      Best b = search_piece(f, p.solution_map[k], center, radius, per, seed, k, grid_total);
      if (b.dist < best.dist) {
        // Rebuild the full nearest point from x'.
        const auto& pc = p.solution_map[k];
        std::span<const double> xs(b.point.data(), static_cast<std::size_t>(n));
        VectorXd pt(z.size());
        pt.head(n) = b.point;
        for (long j = 0; j < m; ++j) pt[n + j] = pc.y[static_cast<std::size_t>(j)].evaluate(xs);
        if (with_lambda)
          for (std::size_t i = 0; i < p.q; ++i) pt[n + m + static_cast<long>(i)] = pc.lambda[i].evaluate(xs);
        b.point = pt;
      }
      take(best, b);
    }
  }
  out.dist = best.dist;
  out.nearest = to_std(best.point);
  out.starts = best.starts;
  return out;
}

std::size_t ipow3(std::size_t q) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < q; ++i) r *= 3;
  return r;
}

VectorXd ball_sample(std::mt19937_64& rng, long d, double r) {
  std::normal_distribution<double> normal(0, 1);
  std::uniform_real_distribution<double> uni(0, 1);
  VectorXd u(d);
  for (long i = 0; i < d; ++i) u[i] = normal(rng);
  double nu = u.norm();
  if (nu == 0) return VectorXd::Zero(d);
  return u / nu * r * std::pow(uni(rng), 1.0 / static_cast<double>(d));
}

KappaReport finish(KappaReport rep, double factor) {
  double first = 0, last = 0;
  for (std::size_t i = 0; i < rep.max_ratio.size(); ++i)
    if (rep.used[i] > 0) {
      if (first == 0) first = rep.max_ratio[i];
      last = rep.max_ratio[i];
    }
  rep.blowup = first > 0 && last > factor * first;
  return rep;
}

}  // namespace

DistResult dist_graph(const MpecProblem& p, std::span<const double> a, std::span<const double> b,
                      std::size_t budget, std::uint64_t seed, unsigned threads) {
  if (a.size() != p.m || b.size() != p.m) throw Error(ErrorCode::DimensionMismatch, "graph point has wrong length");
  VectorXd av = to_eigen(a), bv = to_eigen(b);
  DistResult out;
  if (p.q == 0) {
    out.dist = bv.norm();
    out.nearest = to_std(av);
    out.nearest.resize(2 * p.m, 0.0);
    out.starts = 1;
    return out;
  }
  Family g(p.g_in_y(), p.m, true);
  const std::size_t npat = ipow3(p.q);
  const std::size_t starts = std::max<std::size_t>(1, budget / npat);
  std::function<Best(std::size_t)> run = [&](std::size_t code) {
    std::vector<int> state(p.q);
    std::size_t c = code;
    for (std::size_t i = 0; i < p.q; ++i) {
      state[i] = static_cast<int>(c % 3);
      c /= 3;
    }
    return graph_pattern(g, av, bv, state, starts, seed, code);
  };
  auto results = parallel_map(npat, resolve_threads(threads), run);
  Best best;
  for (const auto& r : results) take(best, r);
  out.dist = best.dist;
  out.nearest = to_std(best.point);
  out.starts = best.starts;
  return out;
}

ProbeReport tangent_ratio_probe(const MpecProblem& p, std::span<const Rational> y, std::span<const Rational> ystar,
                                std::span<const Rational> v, std::span<const Rational> vstar,
                                const ProbeOptions& opts) {
  if (y.size() != p.m || ystar.size() != p.m || v.size() != p.m || vstar.size() != p.m)
    throw Error(ErrorCode::DimensionMismatch, "probe vectors must have length m");
  try {
    if (multiplier_set(p, y, ystar).empty())
      throw Error(ErrorCode::BaseNotOnGraph, "y* is not a normal vector at y");
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InfeasiblePoint) throw Error(ErrorCode::BaseNotOnGraph, e.what());
    throw;
  }
  ProbeReport rep;
  rep.seed = opts.seed;
  VectorXd yb = to_eigen(y), sb = to_eigen(ystar), vd = to_eigen(v), sd = to_eigen(vstar);
  for (std::size_t k = 0; k < opts.t_schedule.size(); ++k) {
    double t = opts.t_schedule[k];
    VectorXd a = yb + t * vd, b = sb + t * sd;
    DistResult d = dist_graph(p, std::span<const double>(a.data(), p.m), std::span<const double>(b.data(), p.m),
                              opts.budget, splitmix(opts.seed + k), opts.threads);
    rep.t.push_back(t);
    rep.dist.push_back(d.dist);
    rep.ratio.push_back(d.dist / t);
    rep.budget_used += d.starts;
  }
  rep.verdict = classify(rep.ratio, opts.vanish_tol, opts.away_tol);
  return rep;
}

DistResult dist_mpcc(const MpecProblem& p, std::span<const double> z, std::size_t budget, std::uint64_t seed) {
  if (z.size() != p.n + p.m + p.q) throw Error(ErrorCode::DimensionMismatch, "MPCC point has wrong length");
  return feasible_set_distance(p, to_eigen(z), true, budget, seed, 20001);
}

DistResult dist_mpec(const MpecProblem& p, std::span<const double> xy, std::size_t budget, std::uint64_t seed) {
  if (xy.size() != p.n + p.m) throw Error(ErrorCode::DimensionMismatch, "MPEC point has wrong length");
  return feasible_set_distance(p, to_eigen(xy), false, budget, seed, 4001);
}

ProbeReport mpcc_ratio_probe(const MpecProblem& p, std::span<const Rational> base, std::span<const Rational> d,
                             const ProbeOptions& opts) {
  const std::size_t nz = p.n + p.m + p.q;
  if (base.size() != nz || d.size() != nz) throw Error(ErrorCode::DimensionMismatch, "MPCC vectors have wrong length");
  ProbeReport rep;
  rep.seed = opts.seed;
  VectorXd zb = to_eigen(base), dd = to_eigen(d);
  for (std::size_t k = 0; k < opts.t_schedule.size(); ++k) {
    double t = opts.t_schedule[k];
    VectorXd z = zb + t * dd;
    DistResult r = dist_mpcc(p, std::span<const double>(z.data(), nz), opts.budget, splitmix(opts.seed + k));
    rep.t.push_back(t);
    rep.dist.push_back(r.dist);
    rep.ratio.push_back(r.dist / t);
    rep.budget_used += r.starts;
    rep.upper_bound_only = rep.upper_bound_only || r.penalty_fallback;
  }
  rep.verdict = classify(rep.ratio, opts.vanish_tol, opts.away_tol);
  return rep;
}

DistResult dist_inequality(const InequalitySystem& sys, std::span<const double> z, std::size_t budget,
                           std::uint64_t seed) {
  if (z.size() != sys.dim) throw Error(ErrorCode::DimensionMismatch, "point has wrong length");
  VectorXd zv = to_eigen(z);
  Family fam(sys.rows, sys.dim, false);
  DistResult out;
  VectorXd pv = fam.value(zv);
  if (pv.size() == 0 || pv.maxCoeff() <= 0) {
    out.nearest = to_std(zv);
    out.starts = 1;
    return out;
  }
  const std::size_t s = sys.rows.size();
  if (s > 16) throw Error(ErrorCode::DimensionMismatch, "too many rows for active-set enumeration");
  const std::size_t npat = std::size_t{1} << s;
  const std::size_t starts = std::max<std::size_t>(1, budget / npat);
  const long d = static_cast<long>(sys.dim);
  Best best;
  std::normal_distribution<double> normal(0, 1);
  for (std::size_t mask = 1; mask < npat; ++mask) {
    std::vector<std::size_t> act;
    for (std::size_t i = 0; i < s; ++i)
      if ((mask >> i) & 1) act.push_back(i);
    Fn res = [&](const VectorXd& x, VectorXd& r, MatrixXd& j) {
      r = x - zv;
      j = MatrixXd::Identity(d, d);
    };
    Fn con = [&](const VectorXd& x, VectorXd& c, MatrixXd& cj) {
      MatrixXd full = fam.jac(x);
      c.resize(static_cast<long>(act.size()));
      cj.resize(static_cast<long>(act.size()), d);
      for (std::size_t k = 0; k < act.size(); ++k) {
        c[static_cast<long>(k)] = evalp(fam.f[act[k]], x);
        cj.row(static_cast<long>(k)) = full.row(static_cast<long>(act[k]));
      }
    };
    auto rng = stream(seed, mask);
    for (std::size_t st = 0; st < starts; ++st) {
      VectorXd x0 = zv;
      if (st > 0)
        for (long i = 0; i < d; ++i) x0[i] += std::pow(10.0, -static_cast<double>(st % 4)) * normal(rng) * (1 + zv.norm());
      VectorXd x = solve_ls(res, con, x0);
      ++best.starts;
      if (!x.allFinite()) continue;
      VectorXd v = fam.value(x);
      bool ok = true;
      for (long i = 0; i < v.size(); ++i)
        if (v[i] > kFeasTol) ok = false;
      if (!ok) continue;
      double dist = (x - zv).norm();
      if (dist < best.dist) {
        best.dist = dist;
        best.point = x;
      }
    }
  }
  out.dist = best.dist;
  out.nearest = to_std(best.point);
  out.starts = best.starts;
  return out;
}

KappaReport error_bound_probe(const InequalitySystem& sys, std::span<const Rational> z, const KappaOptions& opts) {
  VectorXd zb = to_eigen(z);
  Family fam(sys.rows, sys.dim, false);
  KappaReport rep;
  const long d = static_cast<long>(sys.dim);
  for (std::size_t ri = 0; ri < opts.radii.size(); ++ri) {
    double r = opts.radii[ri];
    double worst = 0;
    std::size_t used = 0;
    for (std::size_t s = 0; s < opts.samples; ++s) {
      auto rng = stream(opts.seed, ri * 1000003 + s);
      VectorXd x = zb + ball_sample(rng, d, r);
      VectorXd v = fam.value(x);
      double res = v.cwiseMax(0.0).norm();
      if (!(res > 0)) continue;
      DistResult dr = dist_inequality(sys, std::span<const double>(x.data(), sys.dim), opts.budget,
                                      splitmix(opts.seed + ri * 1000003 + s));
      if (!std::isfinite(dr.dist)) continue;
      ++used;
      worst = std::max(worst, dr.dist / res);
    }
    rep.radii.push_back(r);
    rep.max_ratio.push_back(worst);
    rep.used.push_back(used);
  }
  return finish(rep, opts.blowup_factor);
}

KappaReport error_bound_probe(const MpecProblem& p, GeResidual kind, const KappaOptions& opts) {
  const long n = static_cast<long>(p.n), m = static_cast<long>(p.m), d = n + m;
  VectorXd zb = to_eigen(p.point());
  Family g(p.g_in_y(), p.m, false);
  Family phi(p.phi, p.n + p.m, false);
  Family G(p.G, p.n + p.m, false);
  KappaReport rep;
  for (std::size_t ri = 0; ri < opts.radii.size(); ++ri) {
    double r = opts.radii[ri];
    double worst = 0;
    std::size_t used = 0;
    for (std::size_t s = 0; s < opts.samples; ++s) {
      std::uint64_t idx = ri * 1000003 + s;
      auto rng = stream(opts.seed, idx);
      VectorXd z = zb + ball_sample(rng, d, r);
      VectorXd y = z.segment(n, m);
      VectorXd ph = phi.value(z);
      double res = G.size() ? G.value(z).cwiseMax(0.0).norm() : 0.0;
      if (kind == GeResidual::Graph) {
        VectorXd mph = -ph;
        res += dist_graph(p, std::span<const double>(y.data(), p.m), std::span<const double>(mph.data(), p.m),
                          opts.budget, splitmix(opts.seed + idx))
                   .dist;
      } else {
        VectorXd gv = g.value(y);
        if (gv.size() > 0 && gv.maxCoeff() > 0) continue;  // N_Gamma(y) is empty
        std::vector<long> act;
        for (long i = 0; i < gv.size(); ++i)
          if (gv[i] >= -kFeasTol) act.push_back(i);
        MatrixXd gj = g.jac(y);
        double bestr = ph.norm();
        for (std::size_t mask = 1; mask < (std::size_t{1} << act.size()); ++mask) {
          std::vector<long> sub;
          for (std::size_t i = 0; i < act.size(); ++i)
            if ((mask >> i) & 1) sub.push_back(act[i]);
          MatrixXd a(m, static_cast<long>(sub.size()));
          for (std::size_t k = 0; k < sub.size(); ++k) a.col(static_cast<long>(k)) = gj.row(sub[k]).transpose();
          VectorXd l = a.completeOrthogonalDecomposition().solve(-ph);
          if (l.size() > 0 && l.minCoeff() < 0) continue;
          bestr = std::min(bestr, (ph + a * l).norm());
        }
        res += bestr;
      }
      if (!(res > 0)) continue;
      DistResult dr = dist_mpec(p, std::span<const double>(z.data(), p.n + p.m), opts.budget, splitmix(idx));
      if (!std::isfinite(dr.dist)) continue;
      ++used;
      worst = std::max(worst, dr.dist / res);
    }
    rep.radii.push_back(r);
    rep.max_ratio.push_back(worst);
    rep.used.push_back(used);
  }
  return finish(rep, opts.blowup_factor);
}

}  // namespace mpeccq
