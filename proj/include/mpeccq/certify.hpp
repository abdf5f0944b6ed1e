#pragma once

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mpeccq/lowerlevel.hpp"
#include "mpeccq/quadform.hpp"

namespace mpeccq {

enum class CqStatus { Holds, Fails, Unknown };
std::string to_string(CqStatus s);

/// Named exact vectors, kept in insertion order.
using Witness = std::vector<std::pair<std::string, Vec>>;
const Vec* find_vec(const Witness& w, const std::string& name);

struct CqVerdict {
  std::string name;    // what was checked, e.g. "NNAMCQ" or "lower_level_mscq"
  CqStatus status = CqStatus::Unknown;
  std::string method;  // which test decided
  std::string scope = "constraint qualification";
  Witness witness;
  nlohmann::json certificate;
  std::string reason;
  std::vector<CqVerdict> prerequisites;
  std::vector<CqVerdict> steps;
  nlohmann::json detail;
};

nlohmann::json to_json(const CqVerdict& v);

/// P(z) <= 0 over `dim` variables.
struct InequalitySystem {
  std::size_t dim = 0;
  std::vector<Poly> rows;
};

/// Throws INFEASIBLE_POINT when some row is positive at z.
IndexSet system_active(const InequalitySystem& sys, std::span<const Rational> z);
/// Rows grad P_i(z), s x dim.
Matrix system_jacobian(const InequalitySystem& sys, std::span<const Rational> z);
/// Linearized cone {w : grad P_i(z) w <= 0, i active}.
PolyCone linearized_cone(const InequalitySystem& sys, std::span<const Rational> z);

CqVerdict nnamcq_check(const InequalitySystem& sys, std::span<const Rational> z);
CqVerdict foscms_check(const InequalitySystem& sys, std::span<const Rational> z);
CqVerdict soscms_check(const InequalitySystem& sys, std::span<const Rational> z, unsigned depth = 12);
CqVerdict mscq_cascade(const InequalitySystem& sys, std::span<const Rational> z, unsigned depth = 12);

/// g as a system in y, and G as a system in (x, y).
InequalitySystem lower_system(const MpecProblem& p);
InequalitySystem upper_system(const MpecProblem& p);

CqVerdict nondeg_g_check(const MpecProblem& p);

struct MpecWitness {
  Vec u, v, lambda, eta, w;
};

struct WitnessReport {
  bool uv_nonzero = false;
  bool w_nonzero = false;
  bool lambda_extreme = false;
  bool lambda_directional = false;
  bool ms1 = false;
  bool ms2 = false;
  bool ms3 = false;
  bool ms4 = false;
  Rational psi;
  std::vector<std::string> notes;

  bool ok() const { return uv_nonzero && w_nonzero && lambda_extreme && lambda_directional && ms1 && ms2 && ms3 && ms4; }
};

WitnessReport verify_witness(const MpecProblem& p, const MpecWitness& t);

struct CertifyOptions {
  unsigned depth = 12;
  std::size_t cell_limit = std::size_t{1} << 20;
  unsigned threads = 0;  // 0: MPEC_CQ_THREADS or 1
};

/// Sufficient condition for metric subregularity of the MPEC constraint system at (x, y).
CqVerdict certify_mscq_mpec(const MpecProblem& p, const CertifyOptions& opts = {});

/// Joint form psi(w, eta) for a multiplier, as a symmetric (m+p) x (m+p) matrix.
Matrix phase_one_form(const MpecProblem& p, std::span<const Rational> lambda);

}  // namespace mpeccq
