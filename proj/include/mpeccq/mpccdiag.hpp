#pragma once

#include <optional>
#include <vector>

#include "mpeccq/certify.hpp"
#include "mpeccq/oracle.hpp"

namespace mpeccq {

/// (x, y, lambda) on the MPCC feasible set with its index sets.
struct MpccPoint {
  Vec x, y, lambda;
  IndexSet Ig;       // g_i = 0, lambda_i > 0
  IndexSet Ilambda;  // g_i < 0, lambda_i = 0
  IndexSet I0;       // g_i = 0, lambda_i = 0
  IndexSet IG;       // G_k = 0
};

/// Throws INFEASIBLE_POINT when (x, y, lambda) is not feasible for the MPCC.
MpccPoint mpcc_index_sets(const MpecProblem& p, std::span<const Rational> lambda);

struct Uniqueness {
  bool unique = true;
  std::optional<Vec> second;
};

/// Throws NO_MULTIPLIER when Lambda is empty.
Uniqueness multiplier_uniqueness(const MpecProblem& p);

/// Partition (beta1, beta2) of I0.
struct Branch {
  IndexSet beta1, beta2;
};

std::vector<Branch> branches(const MpccPoint& pt);

struct MfcqReport {
  MpccPoint point;
  std::vector<Branch> branch_list;
  std::vector<CqVerdict> branch_verdicts;
  CqVerdict gradient_independence;  // the family of h, g and lambda gradients
  bool fast_path = false;
};

MfcqReport mpcc_mfcq_check(const MpecProblem& p, std::span<const Rational> lambda);
CqVerdict mpcc_licq_check(const MpecProblem& p, std::span<const Rational> lambda);

/// T^lin_MPCC as a union over partitions of I0, in (u, v, mu) space.
DisjunctiveSet mpec_linearized_cone(const MpecProblem& p, std::span<const Rational> lambda);

enum class StationarityMode { Weak, Mordukhovich };

struct StationarityResult {
  bool feasible = false;
  std::size_t cases = 0;
  Witness multipliers;  // alpha (h), nu (g), delta (-lambda), zeta (G)
};

/// Throws MISSING_OBJECTIVE without F.
StationarityResult stationarity_check(const MpecProblem& p, std::span<const Rational> lambda, StationarityMode mode);
/// Exact residual check of returned multipliers.
bool stationarity_multipliers_valid(const MpecProblem& p, std::span<const Rational> lambda, StationarityMode mode,
                                    const Witness& multipliers);

struct GcqEvidence {
  ProbeReport probe;
  std::string tag;  // GACQ_VIOLATION_EVIDENCE or NO_EVIDENCE
  double threshold = 0.05;
  std::optional<bool> in_expected_tangent_cone;
};

/// Numerical evidence only. Throws DIRECTION_NOT_IN_LIN_CONE when d is not in T^lin_MPCC.
GcqEvidence gcq_evidence(const MpecProblem& p, std::span<const Rational> lambda, std::span<const Rational> d,
                         const ProbeOptions& opts, double threshold = 0.05,
                         const std::optional<Polyhedron>& expected_tangent = std::nullopt);

}  // namespace mpeccq
