#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hncloak/fullsolve.hpp"
#include "hncloak/serialize.hpp"
#include "hncloak/shape_spec.hpp"

namespace py = pybind11;
using namespace hncloak;

namespace {

CloakConfig config_from_kwargs(const std::string& family, double r_i, double r_e, double l,
                               double xi_i, double xi_e, int n, const std::string& bg,
                               double zeta0) {
  const TrigMode mode = (bg == "sin") ? TrigMode::sin : TrigMode::cos;
  CloakConfig cfg = (family == "ellipses") ? CloakConfig::ellipses(l, xi_i, xi_e, n, mode, zeta0)
                                           : CloakConfig::disks(r_i, r_e, n, mode, zeta0);
  if (zeta0 == 0.0) cfg.zeta0 = perfect_zeta(cfg);
  return cfg;
}

py::dict json_to_dict(const json& j) {
  py::object loads = py::module_::import("json").attr("loads");
  return loads(j.dump());
}

}  // namespace

PYBIND11_MODULE(_hncloak, m) {
  m.doc() = "enhanced hydrodynamic near-cloak design for electro-osmotic Hele-Shaw flow";

  py::register_exception<DomainError>(m, "DomainError");
  py::register_exception<GeometryError>(m, "GeometryError");
  py::register_exception<NumericError>(m, "NumericError");
  py::register_exception<ContractError>(m, "ContractError");
  py::register_exception<ParamError>(m, "ParamError");

  py::class_<FourierShape>(m, "FourierShape")
      .def(py::init<>())
      .def(py::init<std::vector<double>, std::vector<double>>(), py::arg("cos"), py::arg("sin"))
      .def_static("parse", &parse_shape_spec, py::arg("spec"),
                  "parse the shape mini-language, e.g. '-cos4' or 'c0:-1,sin3:0.2'")
      .def("__call__", &FourierShape::eval, py::arg("t"))
      .def("deriv", &FourierShape::deriv, py::arg("t"))
      .def("cos_coeff", &FourierShape::cos_coeff, py::arg("m"))
      .def("sin_coeff", &FourierShape::sin_coeff, py::arg("m"))
      .def_property_readonly("max_mode", &FourierShape::max_mode)
      .def("__repr__", [](const FourierShape& s) { return "FourierShape(" + format_shape(s) + ")"; });

  m.def("parse_shape", &parse_shape_spec, py::arg("spec"));
  m.def("format_shape", &format_shape, py::arg("shape"));

  m.def(
      "perfect_zeta",
      [](const std::string& family, double r_i, double r_e, double l, double xi_i, double xi_e,
         int n, const std::string& bg) {
        return perfect_zeta(config_from_kwargs(family, r_i, r_e, l, xi_i, xi_e, n, bg, 0.0));
      },
      py::arg("family") = "disks", py::arg("r_i") = 1.0, py::arg("r_e") = 2.0, py::arg("l") = 1.0,
      py::arg("xi_i") = 0.5, py::arg("xi_e") = 1.0, py::arg("n") = 1, py::arg("bg") = "cos",
      "cloaking zeta potential of the unperturbed structure");

  m.def(
      "gamma_inverse_fourier",
      [](double l, double xi_a, int M) { return gamma_inverse_fourier(EllipticFrame(l), xi_a, M); },
      py::arg("l"), py::arg("xi_a"), py::arg("M"),
      "cosine coefficients c_{a,2m} of the inverse metric factor");

  m.def(
      "design",
      [](const std::string& family, const FourierShape& f, double r_i, double r_e, double l,
         double xi_i, double xi_e, int n, const std::string& bg) {
        const CloakConfig cfg = config_from_kwargs(family, r_i, r_e, l, xi_i, xi_e, n, bg, 0.0);
        return json_to_dict(to_json(design_for(cfg, f)));
      },
      py::arg("family"), py::arg("f"), py::arg("r_i") = 1.0, py::arg("r_e") = 2.0,
      py::arg("l") = 1.0, py::arg("xi_i") = 0.5, py::arg("xi_e") = 1.0, py::arg("n") = 1,
      py::arg("bg") = "cos", "outer shape from the inner one via the cloaking recursions");

  m.def(
      "scattering_coefficients",
      [](const std::string& family, const FourierShape& f, const FourierShape& g, double r_i,
         double r_e, double l, double xi_i, double xi_e, int n, const std::string& bg) {
        const CloakConfig cfg = config_from_kwargs(family, r_i, r_e, l, xi_i, xi_e, n, bg, 0.0);
        const ScatteringReport rep = (cfg.family == Family::disks)
                                         ? scattering_coeffs_annulus(cfg, f, g)
                                         : scattering_coeffs_ellipse(cfg, f, g);
        return json_to_dict(to_json(rep));
      },
      py::arg("family"), py::arg("f"), py::arg("g"), py::arg("r_i") = 1.0, py::arg("r_e") = 2.0,
      py::arg("l") = 1.0, py::arg("xi_i") = 0.5, py::arg("xi_e") = 1.0, py::arg("n") = 1,
      py::arg("bg") = "cos", "first-order scattering coefficients of the perturbed cloak");

  m.def(
      "verify",
      [](const std::string& family, const FourierShape& f, const FourierShape& g, double r_i,
         double r_e, double l, double xi_i, double xi_e, int n, const std::string& bg, int nodes) {
        const CloakConfig cfg = config_from_kwargs(family, r_i, r_e, l, xi_i, xi_e, n, bg, 0.0);
        return json_to_dict(to_json(verify_design(cfg, f, g, nodes)));
      },
      py::arg("family"), py::arg("f"), py::arg("g"), py::arg("r_i") = 1.0, py::arg("r_e") = 2.0,
      py::arg("l") = 1.0, py::arg("xi_i") = 0.5, py::arg("xi_e") = 1.0, py::arg("n") = 1,
      py::arg("bg") = "cos", py::arg("nodes") = 160,
      "closed-form and generic verification of a candidate design");

  m.def(
      "solve_q",
      [](const std::string& family, const FourierShape& f, const FourierShape& g, double epsilon,
         double r_i, double r_e, double l, double xi_i, double xi_e, int n, const std::string& bg,
         int nodes, double half_width) {
        const CloakConfig cfg = config_from_kwargs(family, r_i, r_e, l, xi_i, xi_e, n, bg, 0.0);
        const auto sol = solve_perturbed(PerturbedProblem(cfg, f, g, epsilon), nodes);
        const QResult q = evaluate_Q(*sol, QRegion{half_width, 0.0});
        py::dict out = json_to_dict(to_json(q));
        out["epsilon"] = epsilon;
        out["nodes"] = nodes;
        return out;
      },
      py::arg("family"), py::arg("f"), py::arg("g"), py::arg("epsilon"), py::arg("r_i") = 1.0,
      py::arg("r_e") = 2.0, py::arg("l") = 1.0, py::arg("xi_i") = 0.5, py::arg("xi_e") = 1.0,
      py::arg("n") = 1, py::arg("bg") = "cos", py::arg("nodes") = 256,
      py::arg("half_width") = 3.0, "solve the perturbed problem and evaluate Q");

  m.def(
      "scattered_trace",
      [](const std::string& family, const FourierShape& f, const FourierShape& g, double epsilon,
         double radius, int samples, double r_i, double r_e, double l, double xi_i, double xi_e,
         int n, const std::string& bg, int nodes) {
        const CloakConfig cfg = config_from_kwargs(family, r_i, r_e, l, xi_i, xi_e, n, bg, 0.0);
        const auto sol = solve_perturbed(PerturbedProblem(cfg, f, g, epsilon), nodes);
        std::vector<std::pair<double, double>> out;
        for (const TraceSample& s : scattered_trace(*sol, radius, samples))
          out.emplace_back(s.arc, s.value);
        return out;
      },
      py::arg("family"), py::arg("f"), py::arg("g"), py::arg("epsilon"), py::arg("radius") = 3.0,
      py::arg("samples") = 256, py::arg("r_i") = 1.0, py::arg("r_e") = 2.0, py::arg("l") = 1.0,
      py::arg("xi_i") = 0.5, py::arg("xi_e") = 1.0, py::arg("n") = 1, py::arg("bg") = "cos",
      py::arg("nodes") = 256, "scattered pressure samples on an enclosing circle");
}
