#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "mpeccq/certify.hpp"

namespace mpeccq {

enum class ProbeVerdict { RatioVanishes, RatioBoundedAway, Inconclusive };
std::string to_string(ProbeVerdict v);

struct ProbeOptions {
  std::vector<double> t_schedule{1e-1, 1e-2, 1e-3, 1e-4};
  std::size_t budget = 200;
  std::uint64_t seed = 0;
  double vanish_tol = 1e-3;
  double away_tol = 1e-2;
  unsigned threads = 0;
};

struct ProbeReport {
  std::vector<double> t, dist, ratio;
  std::size_t budget_used = 0;
  std::uint64_t seed = 0;
  bool upper_bound_only = false;  // penalty fallback was used somewhere
  ProbeVerdict verdict = ProbeVerdict::Inconclusive;
};

nlohmann::json to_json(const ProbeReport& r);

/// Best distance found; an upper bound on the true distance up to solver tolerance.
struct DistResult {
  double dist = 0;
  std::vector<double> nearest;
  std::size_t starts = 0;
  bool penalty_fallback = false;
};

/// Distance from (a, b) to gph N_Gamma, Gamma = {y : g(y) <= 0}.
DistResult dist_graph(const MpecProblem& p, std::span<const double> a, std::span<const double> b,
                      std::size_t budget = 200, std::uint64_t seed = 0, unsigned threads = 0);

/// Ratios dist((y,y*) + t (v,v*), gph) / t. Throws BASE_NOT_ON_GRAPH when (y, y*) is off the graph.
ProbeReport tangent_ratio_probe(const MpecProblem& p, std::span<const Rational> y, std::span<const Rational> ystar,
                                std::span<const Rational> v, std::span<const Rational> vstar,
                                const ProbeOptions& opts = {});

/// Distance from z = (x, y, lambda) to the MPCC feasible set, from the fiber at the problem's point and the
/// solution map; penalty multistart when no solution map is given.
DistResult dist_mpcc(const MpecProblem& p, std::span<const double> z, std::size_t budget = 200,
                     std::uint64_t seed = 0);

/// Ratios dist_mpcc(base + t d) / t.
ProbeReport mpcc_ratio_probe(const MpecProblem& p, std::span<const Rational> base, std::span<const Rational> d,
                             const ProbeOptions& opts = {});

struct KappaOptions {
  std::vector<double> radii{1e-1, 1e-2, 1e-3};
  std::size_t samples = 40;
  std::size_t budget = 20;
  std::uint64_t seed = 0;
  double blowup_factor = 10;
};

struct KappaReport {
  std::vector<double> radii, max_ratio;
  std::vector<std::size_t> used;  // samples with positive residual per radius
  bool blowup = false;
};

nlohmann::json to_json(const KappaReport& r);

/// dist(z, {P <= 0}) / |P(z)_+| sampled in balls around z.
KappaReport error_bound_probe(const InequalitySystem& sys, std::span<const Rational> z, const KappaOptions& opts = {});

/// Residual of the generalized equation: Inclusion = dist(0, phi + N_Gamma(y)); Graph = dist((y, -phi), gph N_Gamma).
enum class GeResidual { Inclusion, Graph };

/// Same ratio for the MPEC constraint system at (x, y); distances to the feasible set use the solution map.
KappaReport error_bound_probe(const MpecProblem& p, GeResidual kind, const KappaOptions& opts = {});

/// dist((x, y), {(x', y') : y' solves the lower level at x', G(x', y') <= 0}) from the solution map.
DistResult dist_mpec(const MpecProblem& p, std::span<const double> xy, std::size_t budget = 200,
                     std::uint64_t seed = 0);

/// Distance to {P <= 0} by active-set enumeration.
DistResult dist_inequality(const InequalitySystem& sys, std::span<const double> z, std::size_t budget = 20,
                           std::uint64_t seed = 0);

}  // namespace mpeccq
