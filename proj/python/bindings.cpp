#include <optional>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "zkb/config.hpp"
#include "zkb/error.hpp"
#include "zkb/experiments.hpp"
#include "zkb/kernels.hpp"
#include "zkb/profiles.hpp"
#include "zkb/report.hpp"
#include "zkb/solver.hpp"

namespace py = pybind11;
using namespace zkb;

namespace {

py::array_t<double> to_numpy(const Field& f) {
  const Grid& g = f.grid();
  py::array_t<double> a({g.Nx(), g.Ny()});
  std::copy(f.values().begin(), f.values().end(), a.mutable_data());
  return a;
}

Field from_numpy(const Grid& g, py::array_t<double, py::array::c_style | py::array::forcecast> a) {
  if (a.ndim() != 2 || a.shape(0) != g.Nx() || a.shape(1) != g.Ny())
    throw Error("array shape does not match the grid (Nx, Ny)");
  RVec v(a.data(), a.data() + a.size());
  return Field(g, std::move(v));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "kernels, solver and harness of zkblab";

  // translators run newest first, so the base class goes in first
  py::register_exception<Error>(m, "ZkbError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<HypothesisError>(m, "HypothesisError", PyExc_ValueError);

  py::class_<Grid>(m, "Grid")
      .def(py::init<double, double, int, int>(), py::arg("Lx"), py::arg("Ly"), py::arg("Nx"), py::arg("Ny"))
      .def_property_readonly("Lx", &Grid::Lx)
      .def_property_readonly("Ly", &Grid::Ly)
      .def_property_readonly("Nx", &Grid::Nx)
      .def_property_readonly("Ny", &Grid::Ny)
      .def_property_readonly("dx", &Grid::dx)
      .def_property_readonly("dy", &Grid::dy)
      .def_property_readonly("x", [](const Grid& g) { return g.xs(); })
      .def_property_readonly("y", [](const Grid& g) { return g.ys(); })
      .def("__repr__", [](const Grid& g) {
        return "Grid(" + std::to_string(g.Lx()) + ", " + std::to_string(g.Ly()) + ", " + std::to_string(g.Nx()) +
               ", " + std::to_string(g.Ny()) + ")";
      });

  py::class_<KernelValue>(m, "KernelValue")
      .def_readonly("value", &KernelValue::value)
      .def_readonly("est_error", &KernelValue::est_error);

  m.def("eval_U", [](double x, double y, double t, double mu, int l) { return eval_U(x, y, t, mu, l); },
        py::arg("x"), py::arg("y"), py::arg("t"), py::arg("mu") = 1.0, py::arg("l") = 0);
  m.def("eval_V", [](double x, double y, double t, double mu, int l) { return eval_V(x, y, t, mu, l); },
        py::arg("x"), py::arg("y"), py::arg("t"), py::arg("mu") = 1.0, py::arg("l") = 0);
  m.def("eval_U_minus_V",
        [](double x, double y, double t, double mu, int l) { return eval_U_minus_V(x, y, t, mu, l); },
        py::arg("x"), py::arg("y"), py::arg("t"), py::arg("mu") = 1.0, py::arg("l") = 0);
  m.def("eval_Vstar", [](double X, double Y, double mu, int l) { return eval_Vstar(X, Y, mu, l); }, py::arg("X"),
        py::arg("Y"), py::arg("mu") = 1.0, py::arg("l") = 0);
  m.def("eval_U_grid", [](const Grid& g, double t, double mu) { return to_numpy(eval_U_grid(g, t, mu)); },
        py::arg("grid"), py::arg("t"), py::arg("mu") = 1.0);
  m.def("decay_bound", &decay_bound, py::arg("l"), py::arg("mu"), py::arg("t"));
  m.def("remainder_bound", &remainder_bound, py::arg("l"), py::arg("mu"), py::arg("t"));
  m.def("lower_bound_constant", &lower_bound_constant, py::arg("l"), py::arg("mu"));

  m.def("initial_data",
        [](const std::string& kind, const Grid& g, double amplitude, double width) {
          return to_numpy(initial_data(kind, g, amplitude, width));
        },
        py::arg("kind"), py::arg("grid"), py::arg("amplitude") = 1.0, py::arg("width") = 1.0);
  m.def("linear_propagate",
        [](const Grid& g, py::array_t<double> u0, double t, double mu, bool cubic) {
          return to_numpy(linear_propagate(from_numpy(g, u0), t, mu, cubic ? Dispersion::full : Dispersion::no_cubic));
        },
        py::arg("grid"), py::arg("u0"), py::arg("t"), py::arg("mu") = 1.0, py::arg("cubic") = true);
  m.def("solve",
        [](const Grid& g, py::array_t<double> u0, double mu, double beta, int p, double dt,
           const std::vector<double>& times) {
          SimConfig c{Equation{mu, beta, p}, g, dt, times.empty() ? 0.0 : times.back(), times, 0.0, 1.0};
          const Field f0 = from_numpy(g, u0);
          std::optional<Trajectory> tr;
          {
            py::gil_scoped_release release;
            tr.emplace(run(f0, c));
          }
          py::list out;
          for (const auto& s : tr->snapshots) out.append(py::make_tuple(s.t, to_numpy(s.u)));
          return out;
        },
        py::arg("grid"), py::arg("u0"), py::arg("mu") = 1.0, py::arg("beta") = 1.0, py::arg("p") = 2,
        py::arg("dt") = 0.01, py::arg("times") = std::vector<double>{});
  m.def("eval_M_functional",
        [](const Grid& g, py::array_t<double> u0, int j, double w) {
          return eval_M_functional(from_numpy(g, u0), j, w).value;
        },
        py::arg("grid"), py::arg("u0"), py::arg("j"), py::arg("w"));

  m.def("fit_decay_rate",
        [](const std::vector<double>& t, const std::vector<double>& v, bool relaxed) {
          if (t.size() != v.size()) throw Error("t and values differ in length");
          RateSeries s{"series", {}};
          for (std::size_t n = 0; n < t.size(); ++n) s.points.emplace_back(t[n], v[n]);
          const RateReport r = fit_decay_rate(s, relaxed);
          return py::dict(py::arg("slope") = r.slope, py::arg("slope_ci") = r.slope_ci,
                          py::arg("intercept") = r.intercept, py::arg("residuals") = r.residuals);
        },
        py::arg("t"), py::arg("values"), py::arg("relaxed") = false);
  m.def("theory_slopes", [](int l) {
    return py::dict(py::arg("linf") = theory::linf_slope(l), py::arg("l2") = theory::l2_slope(l),
                    py::arg("remainder") = theory::remainder_slope(l));
  });
}
