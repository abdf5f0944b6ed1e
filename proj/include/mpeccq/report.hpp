#pragma once

#include "json.hpp"
#include "mpeccq/lowerlevel.hpp"

namespace mpeccq {

/// Rationals are serialized as "p/q" strings; index sets are 1-based.
nlohmann::json vec_json(std::span<const Rational> v);
nlohmann::json vecs_json(const std::vector<Vec>& vs);
nlohmann::json index_json(const IndexSet& s);
nlohmann::json matrix_json(const Matrix& m);
/// {ineq, ineq_rhs, eq, eq_rhs, vertices, rays, lineality, empty}
nlohmann::json polyhedron_json(const Polyhedron& p);
/// {ineq, eq, rays, lineality}
nlohmann::json cone_json(const PolyCone& k);

}  // namespace mpeccq
