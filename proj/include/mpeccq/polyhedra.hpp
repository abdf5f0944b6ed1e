#pragma once

#include <optional>
#include <vector>

#include "mpeccq/matrix.hpp"

namespace mpeccq {

/// cone(rays) + span(lineality). Canonical form: lineality is an RREF basis, rays are
/// primitive, orthogonal to the lineality space, deduplicated and sorted.
struct ConeGenerators {
  std::vector<Vec> rays;
  std::vector<Vec> lineality;

  bool pointed() const { return lineality.empty(); }
  friend bool operator==(const ConeGenerators&, const ConeGenerators&) = default;
};

/// {x : ineq x <= 0, eq x = 0} with its generators always populated.
class PolyCone {
 public:
  PolyCone() = default;
  static PolyCone from_hrep(Matrix ineq, Matrix eq);
  static PolyCone from_generators(std::size_t dim, const std::vector<Vec>& rays, const std::vector<Vec>& lineality);
  static PolyCone full(std::size_t dim);
  static PolyCone zero(std::size_t dim);

  std::size_t dim() const { return dim_; }
  const Matrix& ineq() const { return ineq_; }
  const Matrix& eq() const { return eq_; }
  const ConeGenerators& generators() const { return gens_; }
  const std::vector<Vec>& rays() const { return gens_.rays; }
  const std::vector<Vec>& lineality() const { return gens_.lineality; }

  bool contains(std::span<const Rational> x) const;
  bool is_zero() const { return gens_.rays.empty() && gens_.lineality.empty(); }
  /// Sum of all generators; lies in the relative interior.
  Vec interior_point() const;

 private:
  std::size_t dim_ = 0;
  Matrix ineq_, eq_;
  ConeGenerators gens_;
};

struct PolyVRep {
  bool empty = false;
  std::vector<Vec> vertices;
  std::vector<Vec> rays;
  std::vector<Vec> lineality;
};

/// {x : ineq x <= ineq_rhs, eq x = eq_rhs} with its V-representation always populated.
class Polyhedron {
 public:
  Polyhedron() = default;
  Polyhedron(Matrix ineq, Vec ineq_rhs, Matrix eq, Vec eq_rhs);
  static Polyhedron from_generators(std::size_t dim, const std::vector<Vec>& vertices, const std::vector<Vec>& rays,
                                    const std::vector<Vec>& lineality);
  static Polyhedron from_cone(const PolyCone& k);
  static Polyhedron empty_set(std::size_t dim);

  std::size_t dim() const { return dim_; }
  const Matrix& ineq() const { return ineq_; }
  const Vec& ineq_rhs() const { return ineq_rhs_; }
  const Matrix& eq() const { return eq_; }
  const Vec& eq_rhs() const { return eq_rhs_; }
  const PolyVRep& vrep() const { return v_; }
  bool empty() const { return v_.empty; }

  bool contains(std::span<const Rational> x) const;
  bool recession_contains(std::span<const Rational> d) const;
  /// Adds rows and returns the intersection.
  Polyhedron intersect(const Polyhedron& other) const;
  /// Recession cone as a PolyCone.
  PolyCone recession_cone() const;

 private:
  std::size_t dim_ = 0;
  Matrix ineq_, eq_;
  Vec ineq_rhs_, eq_rhs_;
  PolyVRep v_;
};

/// Finite union of polyhedra.
struct DisjunctiveSet {
  std::size_t dim = 0;
  std::vector<Polyhedron> pieces;

  bool contains(std::span<const Rational> x) const;
};

/// Runs double description on the H-rep and returns canonical generators.
ConeGenerators dd_generators(std::size_t dim, const Matrix& ineq, const Matrix& eq);
/// Canonical generator form (see ConeGenerators).
ConeGenerators canonical_generators(std::size_t dim, std::vector<Vec> rays, std::vector<Vec> lineality);

PolyCone dd_convert(const PolyCone& cone);
PolyCone polar(const PolyCone& cone);
PolyCone intersect(const PolyCone& a, const PolyCone& b);
/// a x b in the product space.
PolyCone product(const PolyCone& a, const PolyCone& b);
bool same_set(const PolyCone& a, const PolyCone& b);
bool subset(const PolyCone& a, const PolyCone& b);

struct ExtremePoints {
  std::vector<Vec> points;
  bool not_pointed = false;
};
/// Throws EMPTY_SET when the polyhedron is empty.
ExtremePoints extreme_points(const Polyhedron& p);

/// Throws POINT_NOT_IN_SET when z is not in p.
PolyCone tangent_cone_poly(const Polyhedron& p, std::span<const Rational> z);
PolyCone normal_cone_poly(const Polyhedron& p, std::span<const Rational> z);
/// N_p(z) intersected with u-perp, or nullopt (the empty marker) when u is not tangent.
std::optional<PolyCone> directional_normal_cone_poly(const Polyhedron& p, std::span<const Rational> z,
                                                     std::span<const Rational> u);

/// { M x + offset : x in p }.
Polyhedron affine_image(const Polyhedron& p, const Matrix& m, std::span<const Rational> offset);
PolyCone linear_image(const PolyCone& k, const Matrix& m);

/// Intersection of the polars of the pieces; each piece must be a cone.
PolyCone disjunctive_polar(const DisjunctiveSet& d);

/// Normalized irredundant H-rep: equalities in RREF, primitive rows, LP-based redundancy removal.
Polyhedron canonical_hrep(const Polyhedron& p);
bool same_set(const Polyhedron& a, const Polyhedron& b);
/// Every row of `a` is valid on `b` and vice versa.
bool mutual_row_validity(const Polyhedron& a, const Polyhedron& b);

}  // namespace mpeccq
