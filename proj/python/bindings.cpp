#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "bergman/bergman_tree.hpp"
#include "bergman/cli.hpp"
#include "bergman/dyadic_model.hpp"
#include "bergman/errors.hpp"
#include "bergman/experiments.hpp"
#include "bergman/geometry.hpp"
#include "bergman/operators.hpp"
#include "bergman/orlicz.hpp"

namespace py = pybind11;
using namespace bergman;

namespace {

BallPoint to_point(const std::vector<cplx>& v) {
  if (v.size() == 1) return BallPoint(v[0]);
  if (v.size() == 2) return BallPoint(v[0], v[1]);
  throw ValidationError("points have 1 or 2 complex coordinates");
}

std::vector<cplx> from_point(const BallPoint& p) {
  if (p.dim == 1) return {p.c[0]};
  return {p.c[0], p.c[1]};
}

YoungFunction young(const std::string& family, double exponent, double log_exponent) {
  if (family == "power") return YoungFunction::power(exponent);
  if (family == "power-log") return YoungFunction::power_log(exponent, log_exponent);
  throw ValidationError("young family must be 'power' or 'power-log'");
}

py::dict report_dict(const RatioReport& r) {
  py::dict d;
  d["experiment"] = r.experiment;
  d["model"] = r.model;
  d["seed"] = r.seed;
  d["inputs"] = r.inputs;
  d["truncation"] = r.truncation;
  d["lhs"] = r.lhs;
  d["rhs"] = r.rhs;
  d["ratio"] = r.ratio;
  d["trend"] = r.trend;
  d["bound"] = r.bound;
  d["verdict"] = to_string(r.verdict);
  d["note"] = r.note;
  return d;
}

}  // namespace

PYBIND11_MODULE(_bergman, m) {
  m.doc() = "Bergman trees, weight characteristics and sparse bounds";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  m.def(
      "bergman_distance", [](const std::vector<cplx>& z, const std::vector<cplx>& w) {
        return bergman_distance(to_point(z), to_point(w));
      },
      py::arg("z"), py::arg("w"));
  m.def(
      "involution", [](const std::vector<cplx>& z, const std::vector<cplx>& w) {
        return from_point(involution(to_point(z), to_point(w)));
      },
      py::arg("z"), py::arg("w"));
  m.def(
      "tent_contains", [](const std::vector<cplx>& apex, const std::vector<cplx>& zeta) {
        return CarlesonTent::at(to_point(apex)).contains(to_point(zeta));
      },
      py::arg("apex"), py::arg("zeta"));

  m.def(
      "tree_summary",
      [](int dim, int depth, double radial_offset, double stagger, std::size_t audit_samples, std::uint64_t seed) {
        TreeParams p = TreeParams::defaults(dim);
        p.depth = depth;
        p.radial_offset = radial_offset;
        p.stagger = stagger;
        const BergmanTree t = BergmanTree::build(p);
        std::vector<std::size_t> counts;
        for (int n = 0; n <= t.depth(); ++n) counts.push_back(t.level_count(n));
        const PartitionAudit a = audit_partition(t, audit_samples, seed);
        py::dict d;
        d["nodes"] = t.size();
        d["level_counts"] = counts;
        d["audit_samples"] = a.samples;
        d["violations"] = a.violations;
        d["tiling_gaps"] = a.tiling_gaps;
        return d;
      },
      py::arg("dim") = 1, py::arg("depth") = 4, py::arg("radial_offset") = 0.0, py::arg("stagger") = 0.0,
      py::arg("audit_samples") = 1000, py::arg("seed") = 0);
  m.def(
      "tree_json",
      [](int dim, int depth) {
        TreeParams p = TreeParams::defaults(dim);
        p.depth = depth;
        return BergmanTree::build(p).to_json();
      },
      py::arg("dim") = 1, py::arg("depth") = 4);

  m.def(
      "luxembourg_average",
      [](const std::vector<double>& f, const std::vector<double>& mass, const std::string& family, double exponent,
         double log_exponent) { return luxembourg_average(f, mass, young(family, exponent, log_exponent), false).value; },
      py::arg("f"), py::arg("mass"), py::arg("family") = "power", py::arg("exponent") = 2.0,
      py::arg("log_exponent") = 0.0);
  m.def(
      "young_bp_check",
      [](const std::string& family, double exponent, double log_exponent, double p) {
        const BpCheck c = young_bp_check(young(family, exponent, log_exponent), p);
        py::dict d;
        d["converges"] = c.converges;
        d["total"] = c.total;
        d["integral_to_T"] = c.integral_to_T;
        d["reason"] = c.reason;
        return d;
      },
      py::arg("family"), py::arg("exponent"), py::arg("log_exponent") = 0.0, py::arg("p") = 2.0);

  m.def(
      "radial_projection_norm",
      [](int dim, double alpha_w, double alpha_sigma, double s_h) {
        return radial_projection_norm(dim, 1.0, alpha_w, 1.0, alpha_sigma, s_h).value;
      },
      py::arg("dim"), py::arg("alpha_w"), py::arg("alpha_sigma"), py::arg("s_h"));

  m.def(
      "model_suite",
      [](int depth, int coarse_depth, int seeds, std::uint64_t seed, std::vector<int> growth_depths) {
        ModelSuiteOptions o;
        o.depth = depth;
        o.coarse_depth = coarse_depth;
        o.seeds = seeds;
        o.seed = seed;
        o.growth_depths = std::move(growth_depths);
        py::list out;
        for (const RatioReport& r : model_suite(o)) out.append(report_dict(r));
        return out;
      },
      py::arg("depth") = 8, py::arg("coarse_depth") = 6, py::arg("seeds") = 5, py::arg("seed") = 0,
      py::arg("growth_depths") = std::vector<int>{4, 6, 8});

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
      py::arg("args"));
}
