#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fqsde/builtin.hpp"
#include "fqsde/config.hpp"
#include "fqsde/errors.hpp"
#include "fqsde/experiments.hpp"

namespace py = pybind11;
using namespace fqsde;

namespace {

IncrementLayout parse_layout(const std::string& name) {
  if (name == "single") return IncrementLayout::Single;
  if (name == "pair") return IncrementLayout::MajoranaPair;
  throw ConfigError("layout must be 'single' or 'pair'", "layout");
}

Driver make_driver(const std::string& kind, Complex a1, Complex a2) {
  Driver d;
  d.kind = parse_driver_kind(kind);
  if (d.kind == DriverKind::LinearCombination) d = Driver::linear(a1, a2);
  return d;
}

py::dict report_dict(const SolveReport& r, const QsdeProblem& problem) {
  std::vector<double> norms;
  std::vector<double> defects;
  for (const auto& x : r.trajectory.values()) {
    norms.push_back(lp_norm(x, problem.p));
    defects.push_back(lp_norm(x - x.adjoint(), problem.p));
  }
  std::vector<double> times(problem.space->grid().nodes().begin(), problem.space->grid().nodes().end());
  py::dict d;
  d["iterations"] = r.picard_iterations;
  d["deltas"] = r.deltas;
  d["inner_iterations"] = r.inner_iterations;
  d["residual"] = r.residual;
  d["times"] = times;
  d["lp_norms"] = norms;
  d["selfadjoint_defects"] = defects;
  std::vector<Matrix> mats;
  for (const auto& x : r.trajectory.values()) mats.push_back(x.matrix());
  d["trajectory"] = mats;
  return d;
}

py::dict suite_dict(const SuiteResult& r) {
  py::dict d;
  d["suite"] = r.suite;
  d["passed"] = r.passed();
  d["summary"] = r.summary();
  d["csv"] = r.table.to_csv();
  d["failures"] = r.table.failures_csv();
  return d;
}

}  // namespace

PYBIND11_MODULE(_fqsde, m) {
  m.doc() = "Finite-mode Ito-Clifford calculus and a Picard solver for nonlocal QSDEs";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<ContractViolation>(m, "ContractViolation", base.ptr());
  py::register_exception<NonConvergence>(m, "NonConvergence", base.ptr());
  py::register_exception<ResourceError>(m, "ResourceError", base.ptr());

  py::class_<CliffordSpace, std::shared_ptr<CliffordSpace>>(m, "Space")
      .def_property_readonly("dim", &CliffordSpace::dim)
      .def_property_readonly("generator_count", &CliffordSpace::generator_count)
      .def_property_readonly("n", [](const CliffordSpace& s) { return s.grid().n(); })
      .def_property_readonly("nodes", [](const CliffordSpace& s) {
        return std::vector<double>(s.grid().nodes().begin(), s.grid().nodes().end());
      })
      .def("node_level", [](const CliffordSpace& s, int k) { return s.node_level(k).k; });

  m.def(
      "make_space",
      [](int n, double t0, double T, const std::string& layout) {
        return std::const_pointer_cast<CliffordSpace>(make_space(TimeGrid::uniform(t0, T, n), parse_layout(layout)));
      },
      py::arg("n"), py::arg("t0") = 0.0, py::arg("T") = 1.0, py::arg("layout") = "single",
      "Uniform-grid Clifford space; layout 'pair' doubles the generators for the A/A* drivers.");

  py::class_<CliffordElement>(m, "Element")
      .def(py::init([](std::shared_ptr<CliffordSpace> s, const Matrix& mat) { return CliffordElement(s, mat); }))
      .def_static("identity", [](std::shared_ptr<CliffordSpace> s) { return CliffordElement::identity(s); })
      .def_static("generator", [](std::shared_ptr<CliffordSpace> s, int j) { return CliffordElement::generator(s, j); })
      .def_static("monomial", [](std::shared_ptr<CliffordSpace> s, Mask mask) { return CliffordElement::monomial(s, mask); })
      .def_property_readonly("matrix", &CliffordElement::matrix)
      .def("adjoint", &CliffordElement::adjoint)
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def("__mul__", [](const CliffordElement& a, const CliffordElement& b) { return a * b; })
      .def("__mul__", [](const CliffordElement& a, Complex c) { return a * c; })
      .def("__rmul__", [](const CliffordElement& a, Complex c) { return c * a; })
      .def("__neg__", [](const CliffordElement& a) { return -a; });

  m.def("state", &state);
  m.def("lp_norm", &lp_norm, py::arg("x"), py::arg("p"));
  m.def("op_norm", &op_norm);
  m.def("conditional_expect", [](const CliffordElement& x, int k) { return conditional_expect(x, {k}); });
  m.def("parity", &parity);
  m.def("parity_decompose", [](const CliffordElement& x) {
    const ParityParts p = parity_decompose(x);
    return py::make_tuple(p.even, p.odd);
  });
  m.def("monomial_expand", [](const CliffordElement& x, double cutoff) { return monomial_expand(x, cutoff); },
        py::arg("x"), py::arg("cutoff") = 1e-14);
  m.def("fermion_increment", [](std::shared_ptr<CliffordSpace> s, int k) { return fermion_increment(s, k); });
  m.def("annihilation_increment", [](std::shared_ptr<CliffordSpace> s, int k) { return annihilation_increment(s, k); });
  m.def("creation_increment", [](std::shared_ptr<CliffordSpace> s, int k) { return creation_increment(s, k); });

  m.def(
      "integral",
      [](const std::vector<CliffordElement>& values, const std::string& driver, const std::string& side, Complex a1,
         Complex a2) {
        if (values.empty()) throw DomainError("integral needs at least one value");
        const AdaptedProcess f(values.front().space_ptr(), values);
        const Side sd = side == "left" ? Side::Left : Side::Right;
        return driver_integral(f, make_driver(driver, a1, a2), f.size(), sd);
      },
      py::arg("values"), py::arg("driver") = "fermion", py::arg("side") = "right", py::arg("alpha1") = Complex{1.0, 0.0},
      py::arg("alpha2") = Complex{0.0, 0.0}, "Discrete Ito-Clifford integral of an adapted process.");

  m.def(
      "solve_builtin",
      [](const std::string& name, int n, double p, const std::string& driver, double tol) {
        BuiltinOptions opts;
        opts.n = n;
        opts.p = p;
        opts.driver = make_driver(driver, {1.0, 0.0}, {1.0, 0.0});
        const QsdeProblem problem = make_builtin_problem(name, opts);
        SolveOptions so;
        so.tol = tol;
        return report_dict(picard_solve(problem, so), problem);
      },
      py::arg("name"), py::arg("n") = 8, py::arg("p") = 4.0, py::arg("driver") = "fermion", py::arg("tol") = 1e-10);

  m.def(
      "solve_config",
      [](const std::string& text) {
        const ProblemConfig pc = build_problem_config(parse_config(text));
        return report_dict(picard_solve(pc.problem, pc.options), pc.problem);
      },
      py::arg("text"), "Solve a problem given as configuration text.");

  m.def("builtin_problems", &builtin_problem_names);
  m.def("suite_names", &suite_names);
  m.def(
      "run_suite",
      [](const std::string& name, std::uint64_t seed, int trials, std::vector<int> n_grid) {
        SuiteConfig c;
        c.master_seed = seed;
        c.trials = trials;
        if (!n_grid.empty()) c.n_grid = std::move(n_grid);
        SuiteResult r;
        {
          py::gil_scoped_release release;
          r = run_suite(name, c);
        }
        return suite_dict(r);
      },
      py::arg("name"), py::arg("seed") = 20240601, py::arg("trials") = 20, py::arg("n_grid") = std::vector<int>{});

  m.def(
      "bihari_bound",
      [](double u0, double phi, double horizon, const std::string& rho, double L) {
        OsgoodModulus mod = OsgoodModulus::lipschitz(L);
        if (rho == "log")
          mod = OsgoodModulus::osgood("log", log_rho(L));
        else if (rho == "radial")
          mod = OsgoodModulus::osgood("radial", radial_log_rho(L));
        else if (rho == "sqrt")
          mod = OsgoodModulus::osgood("sqrt", [L](double r) { return L * std::sqrt(r); });
        else if (rho != "linear")
          throw ConfigError("unknown modulus '" + rho + "'", "rho");
        return bihari_bound(u0, [phi](double) { return phi; }, mod, 0.0, horizon);
      },
      py::arg("u0"), py::arg("phi") = 1.0, py::arg("horizon") = 1.0, py::arg("rho") = "linear", py::arg("L") = 1.0);
}
