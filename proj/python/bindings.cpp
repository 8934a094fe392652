#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "grhs/constructor.hpp"
#include "grhs/curvature.hpp"
#include "grhs/error.hpp"
#include "grhs/gallery.hpp"
#include "grhs/geodesics.hpp"
#include "grhs/json_io.hpp"
#include "grhs/soliton.hpp"

namespace py = pybind11;
using namespace grhs;

namespace {

py::dict blocks(const BlockMatrix& b) {
  py::dict d;
  d["base"] = b.base;
  d["mixed"] = b.mixed;
  d["fiber"] = b.fiber;
  return d;
}

GalleryOptions gallery_options(const std::map<std::string, double>& params, const std::string& variant) {
  return {params, variant};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Gradient Ricci-harmonic solitons on warped products";

  auto base_error = py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ArithmeticError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);
  (void)base_error;

  py::class_<Interval>(m, "Interval")
      .def(py::init<>())
      .def_static("open", &Interval::open)
      .def_static("closed", &Interval::closed)
      .def_readwrite("lo", &Interval::lo)
      .def_readwrite("hi", &Interval::hi)
      .def_readwrite("lo_closed", &Interval::lo_closed)
      .def_readwrite("hi_closed", &Interval::hi_closed)
      .def("contains", &Interval::contains)
      .def("__repr__", [](const Interval& d) {
        return std::string(d.lo_closed ? "[" : "(") + std::to_string(d.lo) + ", " + std::to_string(d.hi) +
               (d.hi_closed ? "]" : ")");
      });

  py::class_<GridSpec>(m, "GridSpec")
      .def(py::init<>())
      .def_readwrite("xi", &GridSpec::xi)
      .def_readwrite("zeta", &GridSpec::zeta)
      .def_readwrite("count", &GridSpec::count)
      .def_readwrite("shrink", &GridSpec::shrink);

  py::class_<WarpedCandidate>(m, "Candidate")
      .def_readonly("name", &WarpedCandidate::name)
      .def_property_readonly("n", &WarpedCandidate::n)
      .def_property_readonly("m", &WarpedCandidate::m)
      .def_readonly("theta", &WarpedCandidate::theta)
      .def_readonly("lam", &WarpedCandidate::lambda)
      .def_readonly("mu", &WarpedCandidate::mu)
      .def_property_readonly("has_tau", [](const WarpedCandidate& c) { return c.tau.has_value(); })
      .def("is_numerical", &WarpedCandidate::is_numerical)
      .def("with_explicit_fiber", &WarpedCandidate::with_explicit_fiber)
      .def("to_json", [](const WarpedCandidate& c) { return candidate_to_json(c).dump(); })
      .def_static("from_json", [](const std::string& s) { return candidate_from_json(Json::parse(s)); })
      .def("profile", [](const WarpedCandidate& c, const std::string& which, double t) {
        const Profile* p = which == "phi"   ? &c.phi
                           : which == "f"   ? &c.f
                           : which == "h"   ? &c.h
                           : which == "u"   ? &c.u
                           : which == "tau" && c.tau ? &*c.tau
                                                     : nullptr;
        if (!p) throw ConfigError("no profile named \"" + which + "\"");
        const Jet j = p->eval(t);
        return py::make_tuple(j.value, j.d1, j.d2);
      }, py::arg("which"), py::arg("t"));

  m.def("gallery_ids", &gallery_ids);
  m.def("gallery_variants", &gallery_variants);
  m.def("gallery_defaults", &gallery_defaults);
  m.def("gallery", [](const std::string& id, const std::map<std::string, double>& params,
                      const std::string& variant) { return gallery(id, gallery_options(params, variant)); },
        py::arg("id"), py::arg("params") = std::map<std::string, double>{}, py::arg("variant") = "");
  m.def("gallery_grid", [](const std::string& id, const std::map<std::string, double>& params) {
    return gallery_grid(id, gallery_options(params, ""));
  }, py::arg("id"), py::arg("params") = std::map<std::string, double>{});

  m.def("default_case_params", [](int id) { return case_params_to_json(default_case_params(id)).dump(); });
  m.def("construct", [](const std::string& params) { return construct(case_params_from_json(Json::parse(params))); });

  m.def("default_grid", &default_grid);
  m.def("default_tolerance", &default_tolerance);
  m.def("verify", [](const WarpedCandidate& c, std::optional<GridSpec> grid, std::optional<double> tol) {
    const GridSpec g = grid ? *grid : default_grid(c);
    return report_to_json(verify(c, g, tol ? *tol : default_tolerance(c))).dump();
  }, py::arg("candidate"), py::arg("grid") = py::none(), py::arg("tol") = py::none());

  m.def("warped_ricci", [](const WarpedCandidate& c, double xi, double zeta) { return blocks(warped_ricci(c, xi, zeta)); });
  m.def("grhs_residual", [](const WarpedCandidate& c, double xi, double zeta) {
    const SolitonResidual r = grhs_residual(c, xi, zeta);
    py::dict d = blocks(r.tensor);
    d["harmonic"] = r.harmonic;
    return d;
  });
  m.def("reduced_residuals_base", &reduced_residuals_base);
  m.def("reduced_residuals_fiber", &reduced_residuals_fiber);
  m.def("mu_constant", &mu_constant);
  m.def("fd_ricci", [](const WarpedCandidate& c, const Eigen::VectorXd& x, double step) {
    return fd_ricci(metric_field(c), x, step);
  }, py::arg("candidate"), py::arg("point"), py::arg("step") = 0.0);

  m.def("integrate_geodesic", [](const WarpedCandidate& c, const Eigen::VectorXd& x, const Eigen::VectorXd& v,
                                 double s_max) {
    GeodesicState s0;
    s0.position = x;
    s0.velocity = v;
    const GeodesicTrajectory tr = integrate_geodesic(c, s0, s_max);
    const auto rows = static_cast<Eigen::Index>(tr.samples.size());
    Eigen::VectorXd s(rows);
    Matrix pos(rows, x.size()), vel(rows, x.size());
    for (Eigen::Index i = 0; i < rows; ++i) {
      const auto& st = tr.samples[static_cast<std::size_t>(i)];
      s[i] = st.s;
      pos.row(i) = st.position.transpose();
      vel.row(i) = st.velocity.transpose();
    }
    py::dict d;
    d["s"] = s;
    d["position"] = pos;
    d["velocity"] = vel;
    d["drift"] = tr.drift;
    d["termination"] = std::string(to_string(tr.termination));
    d["s_forward"] = tr.s_forward;
    d["s_backward"] = tr.s_backward;
    return d;
  }, py::arg("candidate"), py::arg("position"), py::arg("velocity"), py::arg("s_max"));
  m.def("probe", [](const WarpedCandidate& c, std::size_t count, double s_max, std::uint64_t seed) {
    ProbeOptions o;
    o.count = count;
    o.s_max = s_max;
    o.seed = seed;
    return probe_to_json(completeness_probe(c, o)).dump();
  }, py::arg("candidate"), py::arg("count") = 50, py::arg("s_max") = 1e3, py::arg("seed") = 0);
}
