#include <sumrules/density.hpp>
#include <sumrules/errors.hpp>
#include <sumrules/expr.hpp>
#include <sumrules/spectra.hpp>
#include <sumrules/sum_rules.hpp>
#include <sumrules/tail_fit.hpp>
#include <sumrules/zero_mode.hpp>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace sumrules;

namespace {

Density make_expression(const std::string& text, double length, const std::map<std::string, double>& params) {
  std::vector<std::string> names;
  expr::ParamMap bound;
  for (const auto& [k, v] : params) {
    names.push_back(k);
    bound[k] = v;
  }
  return Density::expression(expr::BoundExpression(expr::Expression::parse(text, names), bound), length);
}

SpectrumMethod method_or_default(const std::optional<std::string>& m, BoundaryCondition bc) {
  if (m) return parse_method(*m);
  return bc == BoundaryCondition::periodic ? SpectrumMethod::monodromy : SpectrumMethod::pruefer;
}

} // namespace

PYBIND11_MODULE(_sumrules, m) {
  m.doc() = "Spectral sum rules for inhomogeneous strings and membranes";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParameterError>(m, "ParameterError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<AccuracyError>(m, "AccuracyError", base.ptr());
  py::register_exception<SyntaxError>(m, "SyntaxError", base.ptr());
  py::register_exception<UnsupportedError>(m, "UnsupportedError", base.ptr());
  py::register_exception<NoZeroModeError>(m, "NoZeroModeError", base.ptr());
  py::register_exception<EigenSolverError>(m, "EigenSolverError", base.ptr());
  py::register_exception<BracketingError>(m, "BracketingError", base.ptr());
  py::register_exception<FitError>(m, "FitError", base.ptr());

  py::enum_<BoundaryCondition>(m, "BoundaryCondition")
      .value("dirichlet", BoundaryCondition::dirichlet)
      .value("neumann", BoundaryCondition::neumann)
      .value("periodic", BoundaryCondition::periodic);
  m.def("parse_bc", [](const std::string& s) { return parse_bc(s); });

  py::class_<Density>(m, "Density")
      .def_static("uniform", &Density::uniform, py::arg("length") = 1.0)
      .def_static("borg", &Density::borg, py::arg("alpha"))
      .def_static("oscillating", &Density::oscillating, py::arg("epsilon"), py::arg("phase") = 0.0)
      .def_static("annulus", &Density::annulus, py::arg("r_min"))
      .def_static("expression", &make_expression, py::arg("text"), py::arg("length") = 1.0,
                  py::arg("params") = std::map<std::string, double>{})
      .def("__call__", &Density::operator(), py::arg("x"))
      .def_property_readonly("length", &Density::length)
      .def_property_readonly("kind", [](const Density& d) { return std::string(to_string(d.kind())); })
      .def("describe", &Density::describe)
      .def("__repr__", [](const Density& d) { return "<Density " + d.describe() + ">"; });

  py::class_<PositivityReport>(m, "PositivityReport")
      .def_readonly("ok", &PositivityReport::ok)
      .def_readonly("x", &PositivityReport::x)
      .def_readonly("value", &PositivityReport::value);
  m.def("validate_positivity", &validate_positivity, py::arg("density"), py::arg("grid_points") = 4097);

  m.def(
      "evaluate_expression",
      [](const std::string& text, double x, const std::map<std::string, double>& params) {
        std::vector<std::string> names;
        expr::ParamMap bound;
        for (const auto& [k, v] : params) {
          names.push_back(k);
          bound[k] = v;
        }
        return expr::eval_ast(expr::Expression::parse(text, names), x, bound);
      },
      py::arg("text"), py::arg("x"), py::arg("params") = std::map<std::string, double>{});

  py::class_<ZeroModeExpansion>(m, "ZeroModeExpansion")
      .def_readonly("e1", &ZeroModeExpansion::e1)
      .def_readonly("e2", &ZeroModeExpansion::e2)
      .def_readonly("e3", &ZeroModeExpansion::e3)
      .def_readonly("truncation_M", &ZeroModeExpansion::truncation_M)
      .def_readonly("e3_truncation_estimate", &ZeroModeExpansion::e3_truncation_estimate);
  m.def("e0_coefficients", [](const Density& d, BoundaryCondition bc) { return e0_coefficients(d, bc); });

  py::class_<SumRuleResult>(m, "SumRuleResult")
      .def_readonly("order", &SumRuleResult::order)
      .def_readonly("trace_term", &SumRuleResult::trace_term)
      .def_readonly("g1_term", &SumRuleResult::g1_term)
      .def_readonly("zero_mode_subtraction", &SumRuleResult::zero_mode_subtraction)
      .def_readonly("value", &SumRuleResult::value)
      .def_readonly("error_estimate", &SumRuleResult::error_estimate)
      .def_readonly("e0", &SumRuleResult::e0);
  m.def("z1", [](const Density& d, BoundaryCondition bc) { return z1(d, bc); }, py::arg("density"), py::arg("bc"));
  m.def("z2", [](const Density& d, BoundaryCondition bc) { return z2(d, bc); }, py::arg("density"), py::arg("bc"));

  py::class_<AnnulusZ2>(m, "AnnulusZ2")
      .def_readonly("result", &AnnulusZ2::result)
      .def_readonly("without_zero_mode", &AnnulusZ2::without_zero_mode)
      .def_readonly("angular_tail", &AnnulusZ2::angular_tail);
  m.def("annulus_z2", [](double r) { return annulus_z2(r); }, py::arg("r_min"));
  m.def("annulus_asymptotic", &annulus_asymptotic, py::arg("r_min"));
  m.def("annulus_limit", &annulus_limit);

  m.def(
      "reference_value",
      [](const std::string& problem, const std::map<std::string, double>& params, BoundaryCondition bc, int order) {
        expr::ParamMap p(params.begin(), params.end());
        return reference_value(problem, p, bc, order).value;
      },
      py::arg("problem"), py::arg("params"), py::arg("bc"), py::arg("order"));

  py::class_<SpectrumEntry>(m, "SpectrumEntry")
      .def_readonly("value", &SpectrumEntry::value)
      .def_readonly("multiplicity", &SpectrumEntry::multiplicity)
      .def_readonly("accuracy", &SpectrumEntry::accuracy)
      .def_readonly("level", &SpectrumEntry::level)
      .def_readonly("branch", &SpectrumEntry::branch);
  py::class_<Spectrum>(m, "Spectrum")
      .def_readonly("entries", &Spectrum::entries)
      .def_readonly("zero_mode_removed", &Spectrum::zero_mode_removed)
      .def("count", &Spectrum::count)
      .def("values", &Spectrum::values)
      .def("partial_sum", &Spectrum::partial_sum, py::arg("p"))
      .def("__len__", &Spectrum::count);

  m.def(
      "sl_spectrum",
      [](const Density& d, BoundaryCondition bc, std::size_t count, const std::optional<std::string>& method) {
        py::gil_scoped_release release;
        return sl_spectrum(d, bc, count, method_or_default(method, bc));
      },
      py::arg("density"), py::arg("bc"), py::arg("count"), py::arg("method") = py::none());
  m.def("rayleigh_ritz", py::overload_cast<const Density&, BoundaryCondition, std::size_t>(&rayleigh_ritz),
        py::arg("density"), py::arg("bc"), py::arg("states"));
  m.def("bessel_deriv_roots", &bessel_deriv_roots, py::arg("n"), py::arg("k"), py::arg("r_min") = 0.0);
  m.def("disk_annulus_spectrum", &disk_annulus_spectrum, py::arg("r_min"), py::arg("count"));

  py::class_<NumericSumRule>(m, "NumericSumRule")
      .def_readonly("p", &NumericSumRule::p)
      .def_readonly("partial", &NumericSumRule::partial)
      .def_readonly("tail", &NumericSumRule::tail)
      .def_readonly("value", &NumericSumRule::value)
      .def_readonly("error_estimate", &NumericSumRule::error_estimate)
      .def_readonly("count", &NumericSumRule::count);
  m.def("numeric_sum_rule", [](const Spectrum& s, int p, int P) { return numeric_sum_rule(s, p, P); },
        py::arg("spectrum"), py::arg("p"), py::arg("inverse_powers") = 2);
  m.def("weyl_sum_rule", [](const Spectrum& s, int p) { return numeric_sum_rule(s, p, fit_weyl(s)); },
        py::arg("spectrum"), py::arg("p") = 2);
}
