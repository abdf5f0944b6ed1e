#include "mpeccq/quadform.hpp"

#include <algorithm>

#include "mpeccq/errors.hpp"
#include "mpeccq/linalg.hpp"
#include "mpeccq/polyhedra.hpp"

namespace mpeccq {

Rational quad_value(const Matrix& q, std::span<const Rational> x) { return dot(x, q.multiply(x)); }

bool projects_nonzero(std::span<const Rational> x, const std::vector<Vec>& basis) {
  for (const auto& b : basis)
    if (sgn(dot(b, x)) != 0) return true;
  return false;
}

namespace {

std::vector<std::vector<std::size_t>> triangulate_subset(const std::vector<Vec>& rays,
                                                         const std::vector<std::size_t>& idx, std::size_t dim) {
  std::vector<Vec> sub;
  for (auto i : idx) sub.push_back(rays[i]);
  std::size_t r = sub.empty() ? 0 : rank_of(sub, dim);
  if (r == idx.size()) return {idx};
  if (r == 1) return {{idx.front()}};
  std::size_t apex = idx.front();
  PolyCone k = PolyCone::from_generators(dim, sub, {});
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t f = 0; f < k.ineq().rows(); ++f) {
    auto a = k.ineq().row(f);
    if (sgn(dot(a, rays[apex])) == 0) continue;
    std::vector<std::size_t> facet;
    for (auto i : idx)
      if (sgn(dot(a, rays[i])) == 0) facet.push_back(i);
    for (auto& s : triangulate_subset(rays, facet, dim)) {
      s.insert(s.begin(), apex);
      out.push_back(std::move(s));
    }
  }
  return out;
}

Vec l1_normalized(const Vec& v) {
  Rational n = l1_norm(v);
  return sgn(n) == 0 ? v : scaled(v, 1 / n);
}

struct Search {
  const QuadFormQuery& query;
  QuadFormResult result;

  bool is_null(const Vec& u) const {
    return !projects_nonzero(u, query.qualifier) && is_zero(query.q.multiply(u));
  }

  // Returns false when the search must stop (witness found).
  bool cell(const std::vector<Vec>& verts, unsigned depth, bool& unknown) {
    ++result.cells;
    result.deepest = std::max(result.deepest, depth);
    std::vector<const Vec*> live;
    for (const auto& u : verts) {
      bool counted = projects_nonzero(u, query.qualifier);
      Rational val = quad_value(query.q, u);
      if (counted && sgn(val) <= 0) {
        result.sign = QuadSign::Witness;
        result.witness = primitive(u);
        result.witness_value = quad_value(query.q, result.witness);
        return false;
      }
      if (!is_null(u)) live.push_back(&u);
    }
    bool accept = true;
    for (std::size_t i = 0; i < live.size() && accept; ++i)
      for (std::size_t j = i; j < live.size() && accept; ++j)
        if (sgn(dot(*live[i], query.q.multiply(*live[j]))) <= 0) accept = false;
    if (accept) return true;
    if (depth >= query.depth) {
      unknown = true;
      return true;
    }
    std::size_t bi = 0, bj = 1;
    Rational best = -1;
    for (std::size_t i = 0; i < verts.size(); ++i)
      for (std::size_t j = i + 1; j < verts.size(); ++j) {
        Rational d = squared_norm(sub(verts[i], verts[j]));
        if (d > best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    Vec mid = l1_normalized(scaled(add(verts[bi], verts[bj]), Rational(1, 2)));
    std::vector<Vec> left = verts, right = verts;
    left[bj] = mid;
    right[bi] = mid;
    if (!cell(left, depth + 1, unknown)) return false;
    return cell(right, depth + 1, unknown);
  }
};

}  // namespace

std::vector<std::vector<std::size_t>> triangulate_pointed(const std::vector<Vec>& rays) {
  if (rays.empty()) return {};
  std::vector<std::size_t> idx(rays.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  return triangulate_subset(rays, idx, rays.front().size());
}

QuadFormResult quadratic_form_sign_on_cone(const QuadFormQuery& query) {
  const std::size_t n = query.q.rows();
  if (query.q.cols() != n) throw Error(ErrorCode::DimensionMismatch, "form matrix must be square");
  for (const auto* gens : {&query.rays, &query.lineality, &query.qualifier})
    for (const auto& g : *gens)
      if (g.size() != n) throw Error(ErrorCode::DimensionMismatch, "generator has wrong length");
  for (const auto* gens : {&query.rays, &query.lineality})
    for (const auto& g : *gens)
      if (mpeccq::is_zero(g)) throw Error(ErrorCode::DimensionMismatch, "cone generators must be nonzero");

  // Split span(L) + cone(R) into pointed pieces: lineality basis signs times the pointed part.
  ConeGenerators canon = canonical_generators(n, query.rays, query.lineality);
  // Keep the caller's ray order for determinism of witnesses.
  std::vector<Vec> pointed;
  for (const auto& r : query.rays) {
    Vec p = primitive(project_out(r, canon.lineality));
    if (!mpeccq::is_zero(p) && std::find(pointed.begin(), pointed.end(), p) == pointed.end()) pointed.push_back(p);
  }
  auto simplices = triangulate_pointed(pointed);
  if (simplices.empty()) simplices.push_back({});

  Search search{query, {}};
  bool unknown = false;
  const std::size_t k = canon.lineality.size();
  std::vector<Vec> lin = canon.lineality;
  if (k == 0 && query.lineality.empty()) {
    // keep caller-given order when there is no lineality
  } else if (k > 0 && query.lineality.size() == k) {
    lin = query.lineality;
  }
  for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
    for (const auto& simplex : simplices) {
      std::vector<Vec> verts;
      for (std::size_t i = 0; i < k; ++i)
        verts.push_back(l1_normalized((mask >> i) & 1 ? scaled(lin[i], Rational(-1)) : lin[i]));
      for (auto i : simplex) verts.push_back(l1_normalized(pointed[i]));
      if (verts.empty()) continue;
      if (!search.cell(verts, 0, unknown)) return search.result;
    }
  }
  search.result.sign = unknown ? QuadSign::Unknown : QuadSign::Positive;
  return search.result;
}

}  // namespace mpeccq
