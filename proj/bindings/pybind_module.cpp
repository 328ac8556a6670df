// Python bindings for the main operations: dataset construction, DEC audits,
// energy-momentum reports, identity suites and the Clifford operators.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "decmass/clifford.hpp"
#include "decmass/constraints.hpp"
#include "decmass/datasets.hpp"
#include "decmass/mass.hpp"
#include "decmass/report.hpp"
#include "decmass/verify.hpp"

namespace py = pybind11;
using namespace decmass;

namespace {

data::DatasetDescriptor make_descriptor(const std::string& example, int n,
                                        const py::dict& params, double r0,
                                        double decay, uint64_t seed,
                                        const std::string& grid_file) {
  data::DatasetDescriptor d = data::default_descriptor(example, n);
  if (r0 > 0) d.r0 = r0;
  if (decay > 0) d.decay_exponent = decay;
  d.seed = seed;
  if (!grid_file.empty()) d.grid_file = grid_file;
  for (auto item : params) {
    const std::string key = py::str(item.first);
    if (py::isinstance<py::sequence>(item.second) &&
        !py::isinstance<py::str>(item.second)) {
      auto seq = item.second.cast<std::vector<double>>();
      d.params[key] = seq;
    } else {
      d.params[key] = item.second.cast<double>();
    }
  }
  return d;
}

py::object json_to_py(const data::json& j) {
  const py::module_ json_mod = py::module_::import("json");
  return json_mod.attr("loads")(j.dump());
}

}  // namespace

PYBIND11_MODULE(_decmass, m) {
  m.doc() =
      "Constraint, DEC and energy-momentum toolkit for initial data sets on "
      "half-space charts";

  py::register_exception<Error>(m, "DecmassError");

  py::class_<models::InitialDataSet>(m, "InitialDataSet")
      .def_property_readonly(
          "n", [](const models::InitialDataSet& d) { return d.domain.n; })
      .def_property_readonly("model",
                             [](const models::InitialDataSet& d) {
                               return models::model_name(d.domain.model);
                             })
      .def_readonly("name", &models::InitialDataSet::name)
      .def_readonly("decay_exponent", &models::InitialDataSet::decay_exponent)
      .def_readonly("lambda_", &models::InitialDataSet::lambda)
      .def("g", [](const models::InitialDataSet& d, const Vec& p) { return d.g.eval(p); })
      .def("h", [](const models::InitialDataSet& d, const Vec& p) { return d.h.eval(p); });

  m.def("build_dataset", [](const std::string& example, int n, py::dict params,
                            double r0, double decay, uint64_t seed,
                            const std::string& grid_file) {
          return data::build_dataset(make_descriptor(example, n, params, r0,
                                                     decay, seed, grid_file));
        },
        py::arg("example"), py::arg("n") = 3, py::arg("params") = py::dict(),
        py::arg("r0") = 0.0, py::arg("decay") = 0.0, py::arg("seed") = 0,
        py::arg("grid_file") = std::string());

  m.def("interior_constraints",
        [](const models::InitialDataSet& ds, const Vec& p) {
          const auto v = constraints::interior_constraints(ds, p);
          return py::make_tuple(v.rho, v.J, v.J_norm);
        },
        "pointwise (rho, J, |J|_g)");

  m.def("boundary_constraints",
        [](const models::InitialDataSet& ds, const Vec& p) {
          const auto v = constraints::boundary_constraints(ds, p);
          return py::make_tuple(v.H, v.pi_tangential, v.pi_normal);
        },
        "pointwise (H, pi_tangential, pi_normal) in the adapted frame");

  m.def("check_dec",
        [](const models::InitialDataSet& ds, double half_width, int per_axis,
           double tol) {
          const int n = ds.domain.n;
          Vec lo = Vec::Constant(n, -half_width);
          Vec hi = Vec::Constant(n, half_width);
          lo(n - 1) = 0.0;
          std::vector<Vec> interior, boundary;
          constraints::box_samples(ds.domain, lo, hi, per_axis, &interior,
                                   &boundary);
          return json_to_py(
              report::to_json(constraints::check_dec(ds, interior, boundary, tol)));
        },
        py::arg("dataset"), py::arg("half_width") = 3.0,
        py::arg("per_axis") = 4, py::arg("tol") = 1e-9);

  m.def("energy_momentum",
        [](const models::InitialDataSet& ds, std::vector<double> radii,
           int order_polar, int order_azimuth, double power) {
          mass::MassOptions opt;
          opt.radii = std::move(radii);
          opt.order_polar = order_polar;
          opt.order_azimuth = order_azimuth;
          opt.extrap_power = power;
          if (ds.domain.model == models::Model::Flat)
            return json_to_py(report::to_json(mass::energy_momentum_flat(ds, opt)));
          return json_to_py(report::to_json(mass::energy_momentum_pair(ds, opt)));
        },
        py::arg("dataset"), py::arg("radii") = std::vector<double>{},
        py::arg("order_polar") = 24, py::arg("order_azimuth") = 48,
        py::arg("extrap_power") = 0.0);

  m.def("mass_inequality_report",
        [](const models::InitialDataSet& ds) {
          mass::MassOptions opt;
          opt.order_polar = 24;
          opt.order_azimuth = 48;
          return json_to_py(report::to_json(mass::mass_inequality_report(ds, opt)));
        });

  m.def("decay_audit",
        [](const models::InitialDataSet& ds, std::vector<double> radii) {
          return json_to_py(report::to_json(constraints::decay_audit(ds, radii)));
        });

  m.def("run_suite",
        [](const std::string& name, uint64_t seed, double step) {
          return json_to_py(verify::to_json(verify::run_suite(name, seed, step)));
        },
        py::arg("name"), py::arg("seed") = 1, py::arg("step") = 1e-3);
  m.def("suite_names", &verify::suite_names);

  // Clifford surface
  py::class_<cliff::CliffordRep>(m, "CliffordRep")
      .def_readonly("n", &cliff::CliffordRep::n)
      .def_readonly("N", &cliff::CliffordRep::N)
      .def_readonly("relation_residual", &cliff::CliffordRep::relation_residual)
      .def("gamma", [](const cliff::CliffordRep& rep, int a) {
        if (a < 0 || a > rep.n) throw InputError("gamma index out of range");
        return rep.gamma[a];
      });
  m.def("build_rep", &cliff::build_rep);
  m.def("operator_R", [](const cliff::CliffordRep& rep, double rho, const Vec& J) {
    const auto r = cliff::operator_R(rep, rho, J);
    return py::make_tuple(r.matrix, r.eigenvalues);
  });
  m.def("operator_U", [](const cliff::CliffordRep& rep, const Vec& pt) {
    const auto r = cliff::operator_U(rep, pt);
    return py::make_tuple(r.matrix, r.eigenvalues);
  });
  m.def("operator_T", [](const cliff::CliffordRep& rep, const Vec& P) {
    const auto r = cliff::operator_T(rep, P);
    return py::make_tuple(r.matrix, r.eigenvalues, r.commutator_norm);
  });
  m.def("killing_charge", [](const cliff::CliffordRep& rep, const VecC& phi) {
    const auto kc = cliff::killing_charge(rep, phi);
    return py::make_tuple(kc.V, kc.W, kc.margin);
  });
  m.def("verify_decomposition", &cliff::verify_decomposition);
  m.def("killing_dirac_shift_check", &cliff::killing_dirac_shift_check,
        py::arg("rep"), py::arg("sign") = 1);

  m.def("causal_classify", [](const Vec& v, double eps) {
    return models::causal_class_name(models::causal_classify(v, eps));
  }, py::arg("v"), py::arg("eps") = 1e-12);
  m.def("lorentz_inner", &models::lorentz_inner);

  m.attr("__version__") = report::kToolVersion;
}
