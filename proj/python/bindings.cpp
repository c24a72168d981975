#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bfev/biconv.hpp"
#include "bfev/cli.hpp"
#include "bfev/copulas.hpp"
#include "bfev/extremes.hpp"
#include "bfev/family_spec.hpp"
#include "bfev/gaussian.hpp"
#include "bfev/io.hpp"

namespace py = pybind11;
using namespace bfev;

namespace {

py::dict verdict_dict(const Verdict& v) {
  py::dict d;
  d["status"] = to_string(v.status);
  d["reason"] = v.reason;
  d["margin"] = v.margin;
  if (v.witness) {
    py::list pts;
    for (const auto& p : v.witness->points) pts.append(py::make_tuple(p.x, p.y));
    py::dict w;
    w["quantity"] = v.witness->quantity;
    w["points"] = pts;
    w["value"] = v.witness->value;
    d["witness"] = w;
  } else {
    d["witness"] = py::none();
  }
  return d;
}

DiscreteMeasure measure_of(const std::vector<std::tuple<double, double, double>>& atoms) {
  std::vector<Atom> out;
  for (const auto& [x, y, m] : atoms) out.push_back({{x, y}, m});
  return DiscreteMeasure(std::move(out));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bi-free extreme value calculus";

  py::register_exception<PickandsConstraintError>(m, "PickandsConstraintError", PyExc_ValueError);

  py::class_<UnivariateDF>(m, "UnivariateDF")
      .def("__call__", &UnivariateDF::operator(), py::arg("x"))
      .def_property_readonly("lower", &UnivariateDF::lower)
      .def_property_readonly("upper", &UnivariateDF::upper)
      .def_property_readonly("spec", &UnivariateDF::spec)
      .def_static("grid", &UnivariateDF::grid, py::arg("knots"), py::arg("values"),
                  py::arg("upper") = std::nullopt)
      .def_static("dirac", &UnivariateDF::dirac, py::arg("at"));

  py::class_<BivariateDF>(m, "BivariateDF")
      .def("__call__", &BivariateDF::eval, py::arg("x"), py::arg("y"))
      .def_property_readonly("marginal1", &BivariateDF::marginal1)
      .def_property_readonly("marginal2", &BivariateDF::marginal2)
      .def_property_readonly("xknots", [](const BivariateDF& F) {
        return std::vector<double>(F.xknots().begin(), F.xknots().end());
      })
      .def_property_readonly("yknots", [](const BivariateDF& F) {
        return std::vector<double>(F.yknots().begin(), F.yknots().end());
      })
      .def_property_readonly("lower", [](const BivariateDF& F) { return py::make_tuple(F.lower().x, F.lower().y); })
      .def("values", [](const BivariateDF& F) {
        std::vector<std::vector<double>> rows(F.nx(), std::vector<double>(F.ny()));
        for (std::size_t i = 0; i < F.nx(); ++i)
          for (std::size_t j = 0; j < F.ny(); ++j) rows[i][j] = F.value(i, j);
        return rows;
      })
      .def("to_json", [](const BivariateDF& F) { return to_json(F).dump(); })
      .def_static("from_json", [](const std::string& text) { return bivariate_from_json(Json::parse(text)); })
      .def_static("dirac", [](double x, double y) { return BivariateDF::dirac({x, y}); });

  py::class_<Copula>(m, "Copula")
      .def("__call__", &Copula::operator(), py::arg("u"), py::arg("v"))
      .def("f", &Copula::f, py::arg("u"), py::arg("v"))
      .def_property_readonly("spec", &Copula::spec);

  py::class_<PickandsFn>(m, "PickandsFn")
      .def("__call__", &PickandsFn::operator(), py::arg("t"))
      .def_property_readonly("spec", &PickandsFn::spec);

  m.def("copula", &parse_copula, py::arg("spec"));
  m.def("marginal", &parse_marginal, py::arg("spec"));
  m.def("pickands", &parse_pickands, py::arg("spec"));
  m.def("ev_copula", &ev_copula, py::arg("A"));
  m.def("bifree_copula", &bifree_copula, py::arg("A"));

  m.def("free_maxconv", &free_maxconv, py::arg("F"), py::arg("G"));
  m.def("bifree_maxconv", &bifree_maxconv, py::arg("F"), py::arg("G"));
  m.def("bifree_power", &bifree_power, py::arg("F"), py::arg("t"));
  m.def(
      "transform_T", [](const BivariateDF& F, std::pair<double, double> x) { return transform_T(F, {x.first, x.second}); },
      py::arg("F"), py::arg("x"));
  m.def(
      "transform_Q", [](const BivariateDF& F, std::pair<double, double> x) { return transform_Q(F, {x.first, x.second}); },
      py::arg("F"), py::arg("x"));
  m.def("from_exponent_measure",
        [](const std::vector<std::tuple<double, double, double>>& atoms, std::pair<double, double> L) {
          return from_exponent_measure(measure_of(atoms), {L.first, L.second});
        },
        py::arg("atoms"), py::arg("L"));
  m.def("couple",
        [](const Copula& C, const UnivariateDF& m1, const UnivariateDF& m2, std::size_t n) {
          return couple(C, m1, m2, {default_knots(m1, n), default_knots(m2, n)});
        },
        py::arg("C"), py::arg("m1"), py::arg("m2"), py::arg("n") = 51);
  m.def("bifree_ev",
        [](const UnivariateDF& F1, const UnivariateDF& F2, const PickandsFn& A, std::size_t n) {
          return bifree_ev(F1, F2, A, {default_knots(F1, n), default_knots(F2, n)});
        },
        py::arg("F1"), py::arg("F2"), py::arg("A"), py::arg("n") = 51);

  m.def("is_bifree_maxid", [](const BivariateDF& F, double tol) { return verdict_dict(is_bifree_maxid(F, tol)); },
        py::arg("F"), py::arg("tol") = 1e-9);
  m.def("classical_maxid_check",
        [](const BivariateDF& F, int n, double tol) { return verdict_dict(classical_maxid_check(F, n, tol)); },
        py::arg("F"), py::arg("n"), py::arg("tol") = 1e-9);
  m.def("check_copula",
        [](const Copula& C, const std::string& mode, std::size_t grid) {
          CopulaCheckOptions o;
          if (mode == "smooth") o.mode = CopulaCheckMode::smooth;
          else if (mode != "grid") throw std::invalid_argument("mode must be 'grid' or 'smooth'");
          o.grid = grid;
          return verdict_dict(check_bifree_copula(C, o));
        },
        py::arg("C"), py::arg("mode") = "grid", py::arg("grid") = 101);
  m.def("doa_distance",
        [](const Copula& C, const Copula& target, long long n, std::size_t grid) {
          return doa_distance(C, target, n, {linspace(0, 1, grid), linspace(0, 1, grid)});
        },
        py::arg("C"), py::arg("target"), py::arg("n"), py::arg("grid") = 21);

  auto g = m.def_submodule("gaussian", "Bi-free Gaussian law");
  g.def("density", &gaussian::density, py::arg("c"), py::arg("s"), py::arg("t"));
  g.def("cdf", &gaussian::cdf_at, py::arg("c"), py::arg("x"), py::arg("y"), py::arg("rel_tol") = 1e-12);
  g.def("semicircle_cdf", &gaussian::semicircle_cdf, py::arg("x"));
  g.def("identity_check",
        [](double c, double x) {
          const auto r = gaussian::identity_check(c, x);
          return py::make_tuple(r.value, r.reference);
        },
        py::arg("c"), py::arg("x"));
  g.def("maxid_verdict",
        [](double c, int resolution) {
          gaussian::VerdictOptions o;
          o.resolution = resolution;
          return verdict_dict(gaussian::maxid_verdict(c, o));
        },
        py::arg("c"), py::arg("resolution") = 64);

  m.def("_run_experiment",
        [](const std::string& name, const std::string& params) {
          const auto r = run_experiment(name, Json::parse(params));
          return py::make_tuple(report_csv(r), report_summary(r).dump());
        },
        py::arg("name"), py::arg("params"));
}
