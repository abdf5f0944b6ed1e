#include "mpeccq/cli.hpp"

#include <algorithm>
#include <ostream>

#include "CLI11.hpp"
#include "mpeccq/certify.hpp"
#include "mpeccq/errors.hpp"
#include "mpeccq/mpccdiag.hpp"
#include "mpeccq/oracle.hpp"
#include "mpeccq/parallel.hpp"
#include "mpeccq/report.hpp"

namespace mpeccq {

using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

json opt_vec(const std::optional<Vec>& v) { return v ? vec_json(*v) : json(nullptr); }

json witness_json(const Witness& w) {
  json o = json::object();
  for (const auto& [k, v] : w) o[k] = vec_json(v);
  return o;
}

struct Outcome {
  std::string status;
  json result;
};

Vec require(const std::optional<Vec>& v, const char* flag, std::size_t len) {
  if (!v) throw Error(ErrorCode::Usage, std::string("missing ") + flag);
  if (v->size() != len)
    throw Error(ErrorCode::DimensionMismatch,
                std::string(flag) + " has length " + std::to_string(v->size()) + ", expected " + std::to_string(len));
  return *v;
}

json problem_json(const MpecProblem& p) {
  return {{"name", p.name}, {"n", p.n}, {"m", p.m}, {"p", p.p}, {"q", p.q},
          {"x", vec_json(p.x)}, {"y", vec_json(p.y)}, {"has_objective", p.F.has_value()},
          {"solution_map_pieces", p.solution_map.size()}};
}

Outcome cmd_validate(const MpecProblem& p) {
  FeasibilityReport r = validate_point(p);
  json j{{"g_feasible", r.g_feasible},   {"G_feasible", r.G_feasible},
         {"multiplier_feasible", r.multiplier_feasible}, {"g_values", vec_json(r.g_values)},
         {"G_values", vec_json(r.G_values)}, {"ystar", vec_json(r.ystar)},
         {"messages", r.messages}};
  return {r.ok() ? "OK" : "FAILS", j};
}

Outcome cmd_analyze(const MpecProblem& p) {
  Vec ys = p.ystar();
  MultiplierSet ms = multiplier_set(p, p.y, ys);
  json j{{"y", vec_json(p.y)}, {"ystar", vec_json(ys)}, {"active_set", index_json(ms.active)}};
  j["multiplier_set"] = polyhedron_json(ms.lambda);
  j["extreme_points"] = vecs_json(ms.extreme);
  if (ms.empty()) {
    j["farkas"] = vec_json(ms.farkas);
    return {"FAILS", j};
  }
  Uniqueness u = multiplier_uniqueness(p);
  j["uniqueness"] = {{"unique", u.unique}, {"second", opt_vec(u.second)}};
  j["min_norm_multiplier"] = vec_json(min_norm_multiplier(p, p.y, ys));
  CriticalConeData k = critical_cone(p, p.y, ys);
  j["critical_cone"] = cone_json(k.cone());
  j["critical_cone"]["representations_agree"] = k.representations_agree;
  return {"OK", j};
}

Outcome cmd_tangent(const MpecProblem& p, const RunConfig& c) {
  Vec v = require(c.v, "--v", p.m);
  Vec ys = p.ystar();
  GraphSlice s = graph_tangent_slice(p, p.y, ys, v);
  json j{{"v", vec_json(v)}, {"slice_empty", s.empty}, {"theta_unbounded", s.theta_unbounded}};
  if (!s.empty) j["slice"] = polyhedron_json(s.set);
  if (!c.vstar) return {"OK", j};
  Vec vs = require(c.vstar, "--vstar", p.m);
  TangentMembership t = graph_tangent_member(p, p.y, ys, v, vs);
  j["vstar"] = vec_json(vs);
  j["member"] = t.member;
  if (t.member) j["certificate"] = {{"lambda", vec_json(t.lambda)}, {"mu", vec_json(t.mu)}};
  return {t.member ? "MEMBER" : "NON_MEMBER", j};
}

Outcome cmd_certify(const MpecProblem& p, const RunConfig& c) {
  CertifyOptions o;
  o.depth = c.depth;
  o.threads = c.threads;
  CqVerdict v = certify_mscq_mpec(p, o);
  return {to_string(v.status), to_json(v)};
}

ProbeOptions probe_options(const RunConfig& c) {
  ProbeOptions o;
  o.budget = c.budget;
  o.seed = c.seed;
  o.vanish_tol = c.vanish_tol;
  o.away_tol = c.away_tol;
  o.threads = c.threads;
  return o;
}

json stationarity_json(const StationarityResult& r) {
  return {{"feasible", r.feasible}, {"cases", r.cases},
          {"multipliers", r.feasible ? witness_json(r.multipliers) : json(nullptr)}};
}

Outcome cmd_diagnose(const MpecProblem& p, const RunConfig& c) {
  Vec lam = require(c.lambda, "--lambda", p.q);
  MfcqReport mf = mpcc_mfcq_check(p, lam);
  const MpccPoint& pt = mf.point;
  json j;
  j["point"] = {{"x", vec_json(pt.x)}, {"y", vec_json(pt.y)}, {"lambda", vec_json(pt.lambda)}};
  j["index_sets"] = {{"I_g", index_json(pt.Ig)}, {"I_lambda", index_json(pt.Ilambda)},
                     {"I_0", index_json(pt.I0)}, {"I_G", index_json(pt.IG)}};
  Uniqueness u = multiplier_uniqueness(p);
  j["multiplier_uniqueness"] = {{"unique", u.unique}, {"second", opt_vec(u.second)}};
  bool all = true;
  json br = json::array();
  for (std::size_t b = 0; b < mf.branch_list.size(); ++b) {
    all = all && mf.branch_verdicts[b].status == CqStatus::Holds;
    br.push_back({{"beta1", index_json(mf.branch_list[b].beta1)},
                  {"beta2", index_json(mf.branch_list[b].beta2)},
                  {"verdict", to_json(mf.branch_verdicts[b])}});
  }
  j["mpcc_mfcq"] = {{"status", all ? "HOLDS" : "FAILS"},
                    {"second_multiplier_shortcut", mf.fast_path},
                    {"gradient_independence", to_json(mf.gradient_independence)},
                    {"branches", br}};
  j["mpcc_licq"] = to_json(mpcc_licq_check(p, lam));
  DisjunctiveSet lin = mpec_linearized_cone(p, lam);
  json vars = json::array();
  for (std::size_t i = 0; i < p.n; ++i) vars.push_back("u" + std::to_string(i + 1));
  for (std::size_t i = 0; i < p.m; ++i) vars.push_back("v" + std::to_string(i + 1));
  for (std::size_t i = 0; i < p.q; ++i) vars.push_back("mu" + std::to_string(i + 1));
  json pieces = json::array();
  for (const auto& piece : lin.pieces) pieces.push_back(polyhedron_json(piece));
  j["linearized_cone"] = {{"variables", vars}, {"pieces", pieces}};
  if (p.F) {
    j["stationarity"] = {{"weak", stationarity_json(stationarity_check(p, lam, StationarityMode::Weak))},
                         {"mordukhovich",
                          stationarity_json(stationarity_check(p, lam, StationarityMode::Mordukhovich))}};
  } else {
    j["stationarity"] = nullptr;
  }
  if (c.direction) {
    Vec d = require(c.direction, "--direction", p.n + p.m + p.q);
    GcqEvidence ev = gcq_evidence(p, lam, d, probe_options(c), c.threshold);
    j["gcq_evidence"] = {{"direction", vec_json(d)}, {"kind", "numerical evidence"}, {"tag", ev.tag},
                         {"threshold", ev.threshold}, {"probe", to_json(ev.probe)}};
  }
  return {all ? "HOLDS" : "FAILS", j};
}

Outcome cmd_probe(const MpecProblem& p, const RunConfig& c) {
  json j;
  if (!c.kappa.empty()) {
    KappaOptions o;
    o.seed = c.seed;
    GeResidual kind = c.kappa == "graph" ? GeResidual::Graph : GeResidual::Inclusion;
    j["mode"] = "error_bound";
    j["residual"] = c.kappa;
    j["report"] = to_json(error_bound_probe(p, kind, o));
  } else if (c.direction) {
    Vec lam = require(c.lambda, "--lambda", p.q);
    Vec d = require(c.direction, "--direction", p.n + p.m + p.q);
    mpcc_index_sets(p, lam);
    Vec base = concat(concat(p.x, p.y), lam);
    j["mode"] = "mpcc_ratio";
    j["report"] = to_json(mpcc_ratio_probe(p, base, d, probe_options(c)));
  } else if (c.v) {
    Vec v = require(c.v, "--v", p.m);
    Vec vs = c.vstar ? require(c.vstar, "--vstar", p.m) : zeros(p.m);
    j["mode"] = "graph_ratio";
    j["report"] = to_json(tangent_ratio_probe(p, p.y, p.ystar(), v, vs, probe_options(c)));
  } else {
    throw Error(ErrorCode::Usage, "probe needs --v, --direction or --kappa");
  }
  j["kind"] = "numerical evidence";
  return {"OK", j};
}

void render(std::ostream& out, const json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  for (auto it = j.begin(); it != j.end(); ++it) {
    const json& v = it.value();
    bool flat = !v.is_structured() ||
                (v.is_array() && std::none_of(v.begin(), v.end(), [](const json& e) { return e.is_object(); }));
    if (flat) {
      out << pad << it.key() << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
    } else if (v.is_object()) {
      out << pad << it.key() << ":\n";
      render(out, v, indent + 2);
    } else {
      std::size_t k = 0;
      for (const auto& e : v) {
        out << pad << it.key() << "[" << k++ << "]:\n";
        render(out, e, indent + 2);
      }
    }
  }
}

void add_common(CLI::App* sub, RunConfig& c) {
  sub->add_option("problem", c.problem, "problem file (TOML)")->required();
  sub->add_flag("--json", c.json, "emit one JSON document");
  sub->add_option("--threads", c.threads, "worker cap (0: MPEC_CQ_THREADS or 1)");
}

}  // namespace

json to_json(const RunConfig& c) {
  return {{"command", c.command},
          {"problem", c.problem},
          {"lambda", opt_vec(c.lambda)},
          {"v", opt_vec(c.v)},
          {"vstar", opt_vec(c.vstar)},
          {"direction", opt_vec(c.direction)},
          {"kappa", c.kappa.empty() ? json(nullptr) : json(c.kappa)},
          {"depth", c.depth},
          {"budget", c.budget},
          {"seed", c.seed},
          {"threads", c.threads},
          {"tolerances", {{"vanish_tol", c.vanish_tol}, {"away_tol", c.away_tol}, {"threshold", c.threshold}}},
          {"output", c.json ? "json" : "text"}};
}

ExitCode exit_code_for(const std::string& status) {
  if (status == "FAILS" || status == "NON_MEMBER") return ExitCode::Fails;
  if (status == "UNKNOWN") return ExitCode::Unknown;
  if (status == "ERROR") return ExitCode::Usage;
  return ExitCode::Ok;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  std::string lambda, v, vstar, direction;
  CLI::App app{"Constraint qualification checks for MPECs with polynomial data", "mpec-cq"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  auto* validate = app.add_subcommand("validate", "check feasibility of the reference point");
  auto* analyze = app.add_subcommand("analyze", "multiplier set, extreme points, uniqueness, critical cone");
  auto* tangent = app.add_subcommand("tangent-cone", "graph tangent slice at v and membership of (v, v*)");
  auto* certify = app.add_subcommand("certify-mscq", "certify metric subregularity of the MPEC constraints");
  auto* diagnose = app.add_subcommand("diagnose-mpcc", "MPCC constraint qualifications at (x, y, lambda)");
  auto* probe = app.add_subcommand("probe", "numerical distance-ratio and error-bound probes");
  for (auto* s : {validate, analyze, tangent, certify, diagnose, probe}) add_common(s, c);

  tangent->add_option("--v", v, "direction v in y-space, e.g. 1,0,0")->required();
  tangent->add_option("--vstar", vstar, "direction v* in y*-space");
  certify->add_option("--depth", c.depth, "subdivision depth limit")->check(CLI::Range(0u, 64u));
  diagnose->add_option("--lambda", lambda, "lower-level multiplier, e.g. 1/2,1/2")->required();
  diagnose->add_option("--direction", direction, "(u,v,mu) direction for GCQ evidence");
  for (auto* s : {diagnose, probe}) {
    s->add_option("--budget", c.budget, "multistart budget");
    s->add_option("--seed", c.seed, "random seed");
    s->add_option("--vanish-tol", c.vanish_tol, "final-ratio bound for RATIO_VANISHES");
    s->add_option("--away-tol", c.away_tol, "ratio floor for RATIO_BOUNDED_AWAY");
  }
  diagnose->add_option("--threshold", c.threshold, "ratio floor for GCQ evidence");
  probe->add_option("--lambda", lambda, "multiplier for --direction");
  probe->add_option("--direction", direction, "(u,v,mu) direction for the MPCC ratio probe");
  probe->add_option("--v", v, "graph direction v");
  probe->add_option("--vstar", vstar, "graph direction v*");
  probe->add_option("--kappa", c.kappa, "error-bound probe with residual inclusion or graph")
      ->check(CLI::IsMember({"inclusion", "graph"}));

  auto emit_error = [&](ErrorCode code, const std::string& msg) {
    if (c.json) {
      json j{{"tool", "mpec-cq"},   {"version", kVersion},
             {"command", c.command}, {"config", to_json(c)},
             {"status", "ERROR"},    {"exit_code", static_cast<int>(ExitCode::Usage)},
             {"error", {{"code", std::string(to_string(code))}, {"message", msg}}}};
      out << j.dump(2) << "\n";
    } else {
      err << "mpec-cq: " << msg << "\n";
    }
    return static_cast<int>(ExitCode::Usage);
  };

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    c.json = std::find(args.begin(), args.end(), "--json") != args.end();
    return emit_error(ErrorCode::Usage, e.what());
  }

  CLI::App* sub = app.get_subcommands().front();
  c.command = sub->get_name();
  c.threads = resolve_threads(c.threads);
  try {
    auto given = [&](const char* name) { return sub->get_option_no_throw(name) && sub->count(name) > 0; };
    if (given("--lambda")) c.lambda = parse_rational_list(lambda);
    if (given("--v")) c.v = parse_rational_list(v);
    if (given("--vstar")) c.vstar = parse_rational_list(vstar);
    if (given("--direction")) c.direction = parse_rational_list(direction);
    MpecProblem p = load_problem(c.problem);
    p.check();
    Outcome o;
    if (sub == validate)
      o = cmd_validate(p);
    else if (sub == analyze)
      o = cmd_analyze(p);
    else if (sub == tangent)
      o = cmd_tangent(p, c);
    else if (sub == certify)
      o = cmd_certify(p, c);
    else if (sub == diagnose)
      o = cmd_diagnose(p, c);
    else
      o = cmd_probe(p, c);
    const int code = static_cast<int>(exit_code_for(o.status));
    json report{{"tool", "mpec-cq"}, {"version", kVersion},    {"command", c.command},
                {"config", to_json(c)}, {"problem", problem_json(p)}, {"status", o.status},
                {"exit_code", code},    {"result", o.result}};
    if (c.json) {
      out << report.dump(2) << "\n";
    } else {
      out << c.command << " " << c.problem << ": " << o.status << "\n";
      render(out, o.result, 2);
    }
    return code;
  } catch (const Error& e) {
    return emit_error(e.code(), e.what());
  }
}

}  // namespace mpeccq
