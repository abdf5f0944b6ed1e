#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "mpeccq/certify.hpp"
#include "mpeccq/cli.hpp"
#include "mpeccq/errors.hpp"
#include "mpeccq/lowerlevel.hpp"
#include "mpeccq/problem.hpp"

namespace py = pybind11;
using namespace mpeccq;

namespace {

std::vector<std::vector<std::string>> as_strings(const std::vector<Vec>& vs) {
  std::vector<std::vector<std::string>> out;
  for (const auto& v : vs) {
    std::vector<std::string> row;
    for (const auto& x : v) row.push_back(to_string(x));
    out.push_back(row);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.attr("__version__") = "0.1.0";

  py::register_exception<Error>(m, "MpecCqError", PyExc_ValueError);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = run_cli(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run the mpec-cq command line in process; returns (exit_code, stdout, stderr).");

  m.def(
      "extreme_multipliers",
      [](const std::string& path) {
        MpecProblem p = load_problem(path);
        return as_strings(multiplier_set(p, p.y, p.ystar()).extreme);
      },
      py::arg("path"), "Vertices of the lower-level multiplier set at the reference point, as rational strings.");

  m.def(
      "certify",
      [](const std::string& path, unsigned depth, unsigned threads) {
        MpecProblem p = load_problem(path);
        CertifyOptions o;
        o.depth = depth;
        o.threads = threads;
        CqVerdict v;
        {
          py::gil_scoped_release release;
          v = certify_mscq_mpec(p, o);
        }
        return to_json(v).dump();
      },
      py::arg("path"), py::arg("depth") = 12, py::arg("threads") = 0, "Verdict of certify-mscq as a JSON string.");
}
