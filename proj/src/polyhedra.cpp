#include "mpeccq/polyhedra.hpp"

#include <algorithm>
#include <cstdint>

#include "mpeccq/errors.hpp"
#include "mpeccq/linalg.hpp"
#include "mpeccq/lp.hpp"

namespace mpeccq {

namespace {

class Bits {
 public:
  explicit Bits(std::size_t n = 0) : w_((n + 63) / 64, 0) {}
  void resize(std::size_t n) { w_.resize((n + 63) / 64, 0); }
  void set(std::size_t i) { w_[i / 64] |= std::uint64_t{1} << (i % 64); }
  void set_all(std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) set(i);
  }
  Bits operator&(const Bits& o) const {
    Bits r;
    r.w_.resize(w_.size());
    for (std::size_t i = 0; i < w_.size(); ++i) r.w_[i] = w_[i] & o.w_[i];
    return r;
  }
  bool contains(const Bits& o) const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if ((o.w_[i] & ~w_[i]) != 0) return false;
    return true;
  }

 private:
  std::vector<std::uint64_t> w_;
};

struct DdRay {
  Vec v;
  Bits zero;
};

void require_cols(const Matrix& m, std::size_t dim, const char* what) {
  if (m.cols() != dim)
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + " has " + std::to_string(m.cols()) + " columns, expected " + std::to_string(dim));
}

void require_size(std::span<const Rational> v, std::size_t dim, const char* what) {
  if (v.size() != dim)
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + " has length " + std::to_string(v.size()) + ", expected " + std::to_string(dim));
}

Matrix rows_matrix(const std::vector<Vec>& rows, std::size_t dim) { return Matrix::from_rows(rows, dim); }

}  // namespace

ConeGenerators canonical_generators(std::size_t dim, std::vector<Vec> rays, std::vector<Vec> lineality) {
  ConeGenerators out;
  if (!lineality.empty()) {
    Rref rr = rref(rows_matrix(lineality, dim));
    for (std::size_t i = 0; i < rr.reduced.rows(); ++i) out.lineality.push_back(primitive(rr.reduced.row(i)));
  }
  for (auto& r : rays) {
    Vec p = primitive(project_out(r, out.lineality));
    if (!is_zero(p)) out.rays.push_back(std::move(p));
  }
  std::sort(out.rays.begin(), out.rays.end());
  out.rays.erase(std::unique(out.rays.begin(), out.rays.end()), out.rays.end());
  // A ray whose negation is also a ray spans a lineality direction.
  std::vector<Vec> extra;
  for (const auto& r : out.rays) {
    Vec neg = scaled(r, Rational(-1));
    if (r < neg && std::binary_search(out.rays.begin(), out.rays.end(), neg)) extra.push_back(r);
  }
  if (!extra.empty()) {
    auto lin = out.lineality;
    lin.insert(lin.end(), extra.begin(), extra.end());
    return canonical_generators(dim, out.rays, lin);
  }
  return out;
}

ConeGenerators dd_generators(std::size_t dim, const Matrix& ineq, const Matrix& eq) {
  require_cols(ineq, dim, "inequality block");
  require_cols(eq, dim, "equality block");
  std::vector<Vec> lin;
  for (std::size_t i = 0; i < dim; ++i) lin.push_back(unit(dim, i));
  std::vector<DdRay> rays;
  const std::size_t total = eq.rows() + ineq.rows();

  for (std::size_t k = 0; k < total; ++k) {
    const bool is_eq = k < eq.rows();
    auto a = is_eq ? eq.row(k) : ineq.row(k - eq.rows());
    for (auto& r : rays) r.zero.resize(total);

    std::size_t pivot = lin.size();
    for (std::size_t i = 0; i < lin.size(); ++i)
      if (sgn(dot(a, lin[i])) != 0) {
        pivot = i;
        break;
      }
    if (pivot < lin.size()) {
      Vec l0 = lin[pivot];
      Rational s = dot(a, l0);
      std::vector<Vec> next_lin;
      for (std::size_t i = 0; i < lin.size(); ++i) {
        if (i == pivot) continue;
        Vec l = lin[i];
        axpy(l, -dot(a, l) / s, l0);
        next_lin.push_back(primitive(l));
      }
      for (auto& r : rays) {
        axpy(r.v, -dot(a, r.v) / s, l0);
        r.v = primitive(r.v);
        r.zero.set(k);
      }
      lin = std::move(next_lin);
      if (!is_eq) {
        DdRay nr{primitive(sgn(s) > 0 ? scaled(l0, Rational(-1)) : l0), Bits(total)};
        nr.zero.set_all(k);
        rays.push_back(std::move(nr));
      }
      continue;
    }

    std::vector<std::size_t> pos, neg;
    std::vector<DdRay> next;
    std::vector<Rational> val(rays.size());
    for (std::size_t i = 0; i < rays.size(); ++i) {
      val[i] = dot(a, rays[i].v);
      int s = sgn(val[i]);
      if (s > 0) pos.push_back(i);
      if (s < 0) neg.push_back(i);
    }
    for (std::size_t i = 0; i < rays.size(); ++i) {
      int s = sgn(val[i]);
      if (s == 0) {
        DdRay r = rays[i];
        r.zero.set(k);
        next.push_back(std::move(r));
      } else if (s < 0 && !is_eq) {
        next.push_back(rays[i]);
      }
    }
    for (std::size_t p : pos)
      for (std::size_t n : neg) {
        Bits common = rays[p].zero & rays[n].zero;
        bool adjacent = true;
        for (std::size_t o = 0; o < rays.size() && adjacent; ++o)
          if (o != p && o != n && rays[o].zero.contains(common)) adjacent = false;
        if (!adjacent) continue;
        Vec v = scaled(rays[n].v, val[p]);
        axpy(v, -val[n], rays[p].v);
        DdRay r{primitive(v), common};
        r.zero.set(k);
        next.push_back(std::move(r));
      }
    rays = std::move(next);
  }
  std::vector<Vec> out;
  out.reserve(rays.size());
  for (auto& r : rays) out.push_back(std::move(r.v));
  return canonical_generators(dim, std::move(out), std::move(lin));
}

// ---------------------------------------------------------------- PolyCone

PolyCone PolyCone::from_hrep(Matrix ineq, Matrix eq) {
  if (ineq.cols() != eq.cols()) throw Error(ErrorCode::DimensionMismatch, "cone blocks have different widths");
  PolyCone k;
  k.dim_ = ineq.cols();
  k.gens_ = dd_generators(k.dim_, ineq, eq);
  k.ineq_ = std::move(ineq);
  k.eq_ = std::move(eq);
  return k;
}

PolyCone PolyCone::from_generators(std::size_t dim, const std::vector<Vec>& rays, const std::vector<Vec>& lineality) {
  for (const auto& r : rays) require_size(r, dim, "ray");
  for (const auto& l : lineality) require_size(l, dim, "lineality vector");
  // H-rep of cone(R) + span(L) comes from the generators of its polar.
  ConeGenerators dual = dd_generators(dim, rows_matrix(rays, dim), rows_matrix(lineality, dim));
  PolyCone k;
  k.dim_ = dim;
  k.ineq_ = rows_matrix(dual.rays, dim);
  k.eq_ = rows_matrix(dual.lineality, dim);
  k.gens_ = dd_generators(dim, k.ineq_, k.eq_);
  return k;
}

PolyCone PolyCone::full(std::size_t dim) { return from_hrep(Matrix(0, dim), Matrix(0, dim)); }

PolyCone PolyCone::zero(std::size_t dim) { return from_hrep(Matrix(0, dim), Matrix::identity(dim)); }

bool PolyCone::contains(std::span<const Rational> x) const {
  require_size(x, dim_, "point");
  for (std::size_t i = 0; i < ineq_.rows(); ++i)
    if (sgn(dot(ineq_.row(i), x)) > 0) return false;
  for (std::size_t i = 0; i < eq_.rows(); ++i)
    if (sgn(dot(eq_.row(i), x)) != 0) return false;
  return true;
}

Vec PolyCone::interior_point() const {
  Vec s(dim_);
  for (const auto& r : gens_.rays) s = add(s, r);
  return s;
}

PolyCone dd_convert(const PolyCone& cone) { return PolyCone::from_hrep(cone.ineq(), cone.eq()); }

PolyCone polar(const PolyCone& cone) {
  return PolyCone::from_hrep(rows_matrix(cone.rays(), cone.dim()), rows_matrix(cone.lineality(), cone.dim()));
}

PolyCone intersect(const PolyCone& a, const PolyCone& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "intersecting cones of different dimension");
  Matrix ineq = a.ineq(), eq = a.eq();
  ineq.append_rows(b.ineq());
  eq.append_rows(b.eq());
  return PolyCone::from_hrep(std::move(ineq), std::move(eq));
}

PolyCone product(const PolyCone& a, const PolyCone& b) {
  std::size_t n = a.dim() + b.dim();
  auto lift = [&](const Matrix& m, std::size_t off) {
    Matrix r(m.rows(), n);
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) r(i, off + j) = m(i, j);
    return r;
  };
  Matrix ineq = lift(a.ineq(), 0), eq = lift(a.eq(), 0);
  ineq.append_rows(lift(b.ineq(), a.dim()));
  eq.append_rows(lift(b.eq(), a.dim()));
  return PolyCone::from_hrep(std::move(ineq), std::move(eq));
}

bool subset(const PolyCone& a, const PolyCone& b) {
  if (a.dim() != b.dim()) return false;
  for (const auto& r : a.rays())
    if (!b.contains(r)) return false;
  for (const auto& l : a.lineality())
    if (!b.contains(l) || !b.contains(scaled(l, Rational(-1)))) return false;
  return true;
}

bool same_set(const PolyCone& a, const PolyCone& b) { return subset(a, b) && subset(b, a); }

// -------------------------------------------------------------- Polyhedron

Polyhedron::Polyhedron(Matrix ineq, Vec ineq_rhs, Matrix eq, Vec eq_rhs)
    : dim_(ineq.cols()), ineq_(std::move(ineq)), eq_(std::move(eq)), ineq_rhs_(std::move(ineq_rhs)),
      eq_rhs_(std::move(eq_rhs)) {
  require_cols(eq_, dim_, "equality block");
  if (ineq_rhs_.size() != ineq_.rows() || eq_rhs_.size() != eq_.rows())
    throw Error(ErrorCode::DimensionMismatch, "right-hand side length mismatch");
  // Homogenize: (x, t) with a x - b t <= 0, c x - d t = 0, -t <= 0.
  std::size_t h = dim_ + 1;
  Matrix hin(0, h), heq(0, h);
  for (std::size_t i = 0; i < ineq_.rows(); ++i) {
    Vec r(ineq_.row(i).begin(), ineq_.row(i).end());
    r.push_back(-ineq_rhs_[i]);
    hin.append_row(r);
  }
  for (std::size_t i = 0; i < eq_.rows(); ++i) {
    Vec r(eq_.row(i).begin(), eq_.row(i).end());
    r.push_back(-eq_rhs_[i]);
    heq.append_row(r);
  }
  hin.append_row(scaled(unit(h, dim_), Rational(-1)));
  ConeGenerators g = dd_generators(h, hin, heq);
  bool any_vertex = false;
  for (const auto& r : g.rays) {
    const Rational& t = r[dim_];
    Vec x(r.begin(), r.begin() + static_cast<long>(dim_));
    if (sgn(t) > 0) {
      v_.vertices.push_back(scaled(x, 1 / t));
      any_vertex = true;
    } else {
      v_.rays.push_back(primitive(x));
    }
  }
  for (const auto& l : g.lineality) v_.lineality.push_back(Vec(l.begin(), l.begin() + static_cast<long>(dim_)));
  if (!any_vertex) {
    v_ = PolyVRep{};
    v_.empty = true;
    return;
  }
  std::sort(v_.vertices.begin(), v_.vertices.end());
  std::sort(v_.rays.begin(), v_.rays.end());
}

Polyhedron Polyhedron::from_generators(std::size_t dim, const std::vector<Vec>& vertices, const std::vector<Vec>& rays,
                                       const std::vector<Vec>& lineality) {
  if (vertices.empty()) return empty_set(dim);
  std::size_t h = dim + 1;
  std::vector<Vec> hr, hl;
  for (const auto& v : vertices) {
    require_size(v, dim, "vertex");
    Vec r = v;
    r.push_back(1);
    hr.push_back(std::move(r));
  }
  for (const auto& r : rays) {
    require_size(r, dim, "ray");
    Vec x = r;
    x.push_back(0);
    hr.push_back(std::move(x));
  }
  for (const auto& l : lineality) {
    require_size(l, dim, "lineality vector");
    Vec x = l;
    x.push_back(0);
    hl.push_back(std::move(x));
  }
  ConeGenerators dual = dd_generators(h, rows_matrix(hr, h), rows_matrix(hl, h));
  Matrix ineq(0, dim), eq(0, dim);
  Vec b, d;
  for (const auto& r : dual.rays) {
    Vec a(r.begin(), r.begin() + static_cast<long>(dim));
    if (is_zero(a)) continue;
    ineq.append_row(a);
    b.push_back(-r[dim]);
  }
  for (const auto& r : dual.lineality) {
    Vec a(r.begin(), r.begin() + static_cast<long>(dim));
    if (is_zero(a)) continue;
    eq.append_row(a);
    d.push_back(-r[dim]);
  }
  return Polyhedron(std::move(ineq), std::move(b), std::move(eq), std::move(d));
}

Polyhedron Polyhedron::from_cone(const PolyCone& k) {
  return Polyhedron(k.ineq(), Vec(k.ineq().rows()), k.eq(), Vec(k.eq().rows()));
}

Polyhedron Polyhedron::empty_set(std::size_t dim) {
  Matrix ineq(1, dim);
  return Polyhedron(std::move(ineq), Vec{-1}, Matrix(0, dim), Vec{});
}

bool Polyhedron::contains(std::span<const Rational> x) const {
  require_size(x, dim_, "point");
  for (std::size_t i = 0; i < ineq_.rows(); ++i)
    if (dot(ineq_.row(i), x) > ineq_rhs_[i]) return false;
  for (std::size_t i = 0; i < eq_.rows(); ++i)
    if (dot(eq_.row(i), x) != eq_rhs_[i]) return false;
  return true;
}

bool Polyhedron::recession_contains(std::span<const Rational> d) const {
  require_size(d, dim_, "direction");
  for (std::size_t i = 0; i < ineq_.rows(); ++i)
    if (sgn(dot(ineq_.row(i), d)) > 0) return false;
  for (std::size_t i = 0; i < eq_.rows(); ++i)
    if (sgn(dot(eq_.row(i), d)) != 0) return false;
  return true;
}

Polyhedron Polyhedron::intersect(const Polyhedron& other) const {
  if (other.dim_ != dim_) throw Error(ErrorCode::DimensionMismatch, "intersecting polyhedra of different dimension");
  Matrix ineq = ineq_, eq = eq_;
  ineq.append_rows(other.ineq_);
  eq.append_rows(other.eq_);
  return Polyhedron(std::move(ineq), concat(ineq_rhs_, other.ineq_rhs_), std::move(eq), concat(eq_rhs_, other.eq_rhs_));
}

PolyCone Polyhedron::recession_cone() const { return PolyCone::from_hrep(ineq_, eq_); }

bool DisjunctiveSet::contains(std::span<const Rational> x) const {
  for (const auto& p : pieces)
    if (p.contains(x)) return true;
  return false;
}

ExtremePoints extreme_points(const Polyhedron& p) {
  if (p.empty()) throw Error(ErrorCode::EmptySet, "polyhedron has no points");
  ExtremePoints out;
  if (!p.vrep().lineality.empty()) {
    out.not_pointed = true;
    return out;
  }
  out.points = p.vrep().vertices;
  return out;
}

PolyCone tangent_cone_poly(const Polyhedron& p, std::span<const Rational> z) {
  if (!p.contains(z)) throw Error(ErrorCode::PointNotInSet, "point " + to_string(z) + " is not in the polyhedron");
  Matrix active(0, p.dim());
  for (std::size_t i = 0; i < p.ineq().rows(); ++i)
    if (dot(p.ineq().row(i), z) == p.ineq_rhs()[i]) active.append_row(p.ineq().row(i));
  return PolyCone::from_hrep(std::move(active), p.eq());
}

PolyCone normal_cone_poly(const Polyhedron& p, std::span<const Rational> z) { return polar(tangent_cone_poly(p, z)); }

std::optional<PolyCone> directional_normal_cone_poly(const Polyhedron& p, std::span<const Rational> z,
                                                     std::span<const Rational> u) {
  PolyCone t = tangent_cone_poly(p, z);
  if (!t.contains(u)) return std::nullopt;
  std::vector<Vec> rays;
  for (std::size_t i = 0; i < t.ineq().rows(); ++i)
    if (sgn(dot(t.ineq().row(i), u)) == 0) rays.push_back(t.ineq().row_vec(i));
  return PolyCone::from_generators(p.dim(), rays, p.eq().to_rows());
}

Polyhedron affine_image(const Polyhedron& p, const Matrix& m, std::span<const Rational> offset) {
  require_cols(m, p.dim(), "map");
  require_size(offset, m.rows(), "offset");
  if (p.empty()) return Polyhedron::empty_set(m.rows());
  std::vector<Vec> verts, rays, lin;
  for (const auto& v : p.vrep().vertices) verts.push_back(add(m.multiply(v), offset));
  for (const auto& r : p.vrep().rays) rays.push_back(m.multiply(r));
  for (const auto& l : p.vrep().lineality) lin.push_back(m.multiply(l));
  return Polyhedron::from_generators(m.rows(), verts, rays, lin);
}

PolyCone linear_image(const PolyCone& k, const Matrix& m) {
  require_cols(m, k.dim(), "map");
  std::vector<Vec> rays, lin;
  for (const auto& r : k.rays()) rays.push_back(m.multiply(r));
  for (const auto& l : k.lineality()) lin.push_back(m.multiply(l));
  return PolyCone::from_generators(m.rows(), rays, lin);
}

PolyCone disjunctive_polar(const DisjunctiveSet& d) {
  Matrix ineq(0, d.dim), eq(0, d.dim);
  for (const auto& piece : d.pieces) {
    if (piece.dim() != d.dim) throw Error(ErrorCode::DimensionMismatch, "piece dimension differs from the union");
    for (const auto& r : piece.ineq_rhs())
      if (sgn(r) != 0) throw Error(ErrorCode::DimensionMismatch, "disjunctive polar needs conic pieces");
    for (const auto& r : piece.eq_rhs())
      if (sgn(r) != 0) throw Error(ErrorCode::DimensionMismatch, "disjunctive polar needs conic pieces");
    if (piece.empty()) continue;
    for (const auto& r : piece.vrep().rays) ineq.append_row(r);
    for (const auto& l : piece.vrep().lineality) eq.append_row(l);
  }
  return PolyCone::from_hrep(std::move(ineq), std::move(eq));
}

Polyhedron canonical_hrep(const Polyhedron& p) {
  if (p.empty()) return Polyhedron::empty_set(p.dim());
  std::size_t n = p.dim();
  Matrix eq(0, n);
  Vec d;
  {
    Matrix aug(p.eq().rows(), n + 1);
    for (std::size_t i = 0; i < p.eq().rows(); ++i) {
      for (std::size_t j = 0; j < n; ++j) aug(i, j) = p.eq()(i, j);
      aug(i, n) = p.eq_rhs()[i];
    }
    Rref rr = rref(aug);
    for (std::size_t i = 0; i < rr.reduced.rows(); ++i) {
      Vec row = primitive(rr.reduced.row(i));
      Vec a(row.begin(), row.begin() + static_cast<long>(n));
      eq.append_row(a);
      d.push_back(row[n]);
    }
  }
  std::vector<Vec> rows;
  for (std::size_t i = 0; i < p.ineq().rows(); ++i) {
    Vec row = p.ineq().row_vec(i);
    row.push_back(p.ineq_rhs()[i]);
    Vec a(row.begin(), row.begin() + static_cast<long>(n));
    if (is_zero(a)) continue;
    rows.push_back(primitive(row));
  }
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  std::vector<bool> keep(rows.size(), true);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    LpProblem lp = LpProblem::feasibility(n);
    lp.sense = LpSense::Maximize;
    lp.objective.assign(rows[i].begin(), rows[i].begin() + static_cast<long>(n));
    lp.eq = eq;
    lp.eq_rhs = d;
    for (std::size_t j = 0; j < rows.size(); ++j) {
      if (j == i || !keep[j]) continue;
      lp.ineq.append_row(std::span<const Rational>(rows[j].data(), n));
      lp.ineq_rhs.push_back(rows[j][n]);
    }
    LpOutcome out = lp_solve(lp);
    if (out.status == LpStatus::Optimal && out.value <= rows[i][n]) keep[i] = false;
  }
  Matrix ineq(0, n);
  Vec b;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!keep[i]) continue;
    ineq.append_row(std::span<const Rational>(rows[i].data(), n));
    b.push_back(rows[i][n]);
  }
  return Polyhedron(std::move(ineq), std::move(b), std::move(eq), std::move(d));
}

bool mutual_row_validity(const Polyhedron& a, const Polyhedron& b) {
  auto valid_on = [](const Polyhedron& rows, const Polyhedron& set) {
    if (set.empty()) return true;
    for (const auto& v : set.vrep().vertices)
      if (!rows.contains(v)) return false;
    for (const auto& r : set.vrep().rays)
      if (!rows.recession_contains(r)) return false;
    for (const auto& l : set.vrep().lineality)
      if (!rows.recession_contains(l) || !rows.recession_contains(scaled(l, Rational(-1)))) return false;
    return true;
  };
  return a.dim() == b.dim() && valid_on(a, b) && valid_on(b, a);
}

bool same_set(const Polyhedron& a, const Polyhedron& b) {
  return a.empty() == b.empty() && mutual_row_validity(a, b);
}

}  // namespace mpeccq
