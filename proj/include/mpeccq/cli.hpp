#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mpeccq/rational.hpp"

namespace mpeccq {

/// Resolved settings of one invocation; embedded in every report.
struct RunConfig {
  std::string command;
  std::string problem;
  std::optional<Vec> lambda;
  std::optional<Vec> v, vstar, direction;
  std::string kappa;  // "", "inclusion" or "graph"
  unsigned depth = 12;
  std::size_t budget = 200;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0 = MPEC_CQ_THREADS, then 1
  double vanish_tol = 1e-3;
  double away_tol = 1e-2;
  double threshold = 0.05;
  bool json = false;
};

nlohmann::json to_json(const RunConfig& c);

enum class ExitCode : int { Ok = 0, Fails = 1, Unknown = 2, Usage = 64 };

/// Exit code from the top-level status string of a report.
ExitCode exit_code_for(const std::string& status);

/// Runs the command line `args` (without the program name). Writes one report to `out`;
/// diagnostics in text mode go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mpeccq
