#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "kkd/analysis.hpp"
#include "kkd/entropy.hpp"
#include "kkd/error.hpp"
#include "kkd/region.hpp"
#include "kkd/scenario.hpp"
#include "kkd/solver.hpp"

namespace py = pybind11;
using namespace kkd;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<double> to_vector(const Array& a) { return {a.data(), a.data() + a.size()}; }

Array to_array(const std::vector<double>& v) {
  Array out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::dict field_dict(const StateField& f) {
  py::dict d;
  d["t"] = f.t;
  d["x"] = to_array(f.grid.centers());
  d["u"] = to_array(f.u);
  d["v"] = to_array(f.v);
  return d;
}

}  // namespace

PYBIND11_MODULE(_kkd, m) {
  m.doc() = "Damped symmetric Keyfitz-Kranzer system: model, entropy, solver and diagnostics";

  static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  py::class_<PhiModel>(m, "Phi")
      .def(py::init([](const std::string& spec, double r_max) { return parse_phi_spec(spec, r_max); }),
           py::arg("spec"), py::arg("r_max") = 1e3)
      .def("value", &PhiModel::value)
      .def("d1", &PhiModel::d1)
      .def("d2", &PhiModel::d2)
      .def_property_readonly("r_max", &PhiModel::r_max)
      .def("__repr__", [](const PhiModel& p) { return "Phi('" + p.describe() + "')"; });

  m.def("eigenvalues", [](const PhiModel& phi, double u, double v) {
    const auto e = eigenvalues({u, v}, phi);
    return py::make_tuple(e.lambda1, e.lambda2);
  });
  m.def("eigenvectors", [](double u, double v) {
    const auto e = eigenvectors({u, v});
    return py::make_tuple(e.r1, e.r2);
  });
  m.def("jacobian", [](const PhiModel& phi, double u, double v) { return jacobian({u, v}, phi); });
  m.def("riemann_invariants", [](const PhiModel& phi, double u, double v) {
    const auto ri = riemann_invariants({u, v}, phi);
    return py::make_tuple(ri.W, ri.Z);
  });
  m.def("genuine_nonlinearity", [](const PhiModel& phi, double u, double v, int field) {
    return classify_field({u, v}, phi, field).gn_value;
  });

  m.def(
      "entropy_flux",
      [](double power, const PhiModel& phi, const Array& r) {
        const auto pair = power_entropy_pair(power, phi);
        std::vector<double> q;
        for (double x : to_vector(r)) q.push_back(pair.q(x));
        return to_array(q);
      },
      py::arg("m"), py::arg("phi"), py::arg("r"));

  m.def(
      "simulate",
      [](const PhiModel& phi, const Array& u0, const Array& v0, double x_lo, double x_hi, double a,
         double b, double t_end, const std::vector<double>& output_times, const std::string& boundary) {
        if (u0.size() != v0.size()) throw Error(ErrorKind::ConfigError, "u0 and v0 differ in length");
        const Grid1D g(x_lo, x_hi, static_cast<int>(u0.size()),
                       boundary == "outflow" ? Boundary::Outflow : Boundary::Periodic);
        StateField init(g);
        init.u = to_vector(u0);
        init.v = to_vector(v0);
        SolverConfig cfg;
        cfg.t_end = t_end;
        cfg.output_times = output_times;
        py::list out;
        for (const auto& f : simulate(init, phi, {a, b}, cfg)) out.append(field_dict(f));
        return out;
      },
      py::arg("phi"), py::arg("u0"), py::arg("v0"), py::arg("x_lo") = 0.0,
      py::arg("x_hi") = 6.283185307179586, py::arg("a") = 0.0, py::arg("b") = 0.0,
      py::arg("t_end") = 1.0, py::arg("output_times") = std::vector<double>{},
      py::arg("boundary") = "periodic");

  m.def(
      "region_contains",
      [](const PhiModel& phi, double u, double v, double C0, double C1, double C2) {
        return contains({u, v}, {C0, C1, C2}, phi);
      },
      py::arg("phi"), py::arg("u"), py::arg("v"), py::arg("C0"), py::arg("C1"), py::arg("C2"));

  m.def(
      "run_scenario",
      [](const std::filesystem::path& cfg, const std::filesystem::path& out_dir) {
        const auto res = run_scenario(load_scenario(cfg), out_dir);
        py::dict checks;
        for (const auto& c : res.checks) checks[py::str(c.name)] = py::make_tuple(c.pass, c.detail);
        return py::make_tuple(res.pass(), checks);
      },
      py::arg("config"), py::arg("out_dir"));
}
