#include "mpeccq/report.hpp"

namespace mpeccq {

using nlohmann::json;

json vec_json(std::span<const Rational> v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}

json vecs_json(const std::vector<Vec>& vs) {
  json a = json::array();
  for (const auto& v : vs) a.push_back(vec_json(v));
  return a;
}

json index_json(const IndexSet& s) {
  json a = json::array();
  for (auto i : s) a.push_back(i + 1);
  return a;
}

json matrix_json(const Matrix& m) {
  json a = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) a.push_back(vec_json(m.row(r)));
  return a;
}

json polyhedron_json(const Polyhedron& p) {
  return {{"dim", p.dim()},
          {"empty", p.empty()},
          {"ineq", matrix_json(p.ineq())},
          {"ineq_rhs", vec_json(p.ineq_rhs())},
          {"eq", matrix_json(p.eq())},
          {"eq_rhs", vec_json(p.eq_rhs())},
          {"vertices", vecs_json(p.vrep().vertices)},
          {"rays", vecs_json(p.vrep().rays)},
          {"lineality", vecs_json(p.vrep().lineality)}};
}

json cone_json(const PolyCone& k) {
  return {{"dim", k.dim()},
          {"ineq", matrix_json(k.ineq())},
          {"eq", matrix_json(k.eq())},
          {"rays", vecs_json(k.rays())},
          {"lineality", vecs_json(k.lineality())}};
}

}  // namespace mpeccq
