#include "decmass/report.hpp"

#include <sstream>

namespace decmass {
namespace report {

namespace {

json vec_json(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

json to_json(const constraints::DecReport& r) {
  json j;
  j["tolerance"] = r.tol;
  j["interior"] = {{"worst_margin", r.interior_worst},
                   {"worst_point", vec_json(r.interior_worst_point)},
                   {"pass", r.interior_pass},
                   {"samples", r.interior_samples}};
  j["boundary_tangential"] = {{"worst_margin", r.tangential_worst},
                              {"worst_point", vec_json(r.tangential_worst_point)},
                              {"pass", r.tangential_pass},
                              {"samples", r.boundary_samples}};
  j["boundary_normal"] = {{"worst_margin", r.normal_worst},
                          {"worst_point", vec_json(r.normal_worst_point)},
                          {"pass", r.normal_pass},
                          {"samples", r.boundary_samples}};
  j["pass"] = r.pass();
  return j;
}

json to_json(const constraints::DecayAudit& a) {
  json rows = json::array();
  for (const auto& r : a.rows) {
    rows.push_back({{"r", r.r},
                    {"weighted_f", r.f0},
                    {"weighted_df", r.f1},
                    {"weighted_ddf", r.f2},
                    {"weighted_h", r.h0},
                    {"weighted_dh", r.h1},
                    {"shell_interior", r.shell_interior},
                    {"shell_boundary", r.shell_boundary}});
  }
  return {{"rows", rows},
          {"sup_pass", a.sup_pass},
          {"integral_pass", a.integral_pass},
          {"pass", a.pass()}};
}

json to_json(const mass::Extrapolation& e) {
  return {{"radii", e.radii},
          {"values", e.values},
          {"extrapolants", e.extrapolants},
          {"value", e.value},
          {"error", e.error},
          {"power", e.power}};
}

json to_json(const mass::FlatMassReport& r) {
  json j;
  j["E"] = r.E;
  j["E_error"] = r.E_error;
  j["P"] = vec_json(r.P);
  j["P_error"] = r.P_error;
  j["lorentz_sq"] = r.lorentz_sq;  // -E^2 + |P|^2
  j["causal_class"] = models::causal_class_name(r.causal);
  j["E_minus_P"] = r.E - r.P.norm();
  // comparison column only; the raw E above is the definition value
  j["adm_normalized_E"] = r.adm_normalized_E;
  j["E_extrapolation"] = to_json(r.E_extrap);
  json pext = json::array();
  for (const auto& e : r.P_extrap) pext.push_back(to_json(e));
  j["P_extrapolation"] = pext;
  return j;
}

json to_json(const mass::HypMassReport& r) {
  json j;
  j["E"] = vec_json(r.E);
  j["E_error"] = vec_json(r.E_error);
  j["P"] = vec_json(r.P);
  j["P_error"] = vec_json(r.P_error);
  j["lorentz_EE"] = r.lorentz_EE;
  j["lorentz_PP"] = r.lorentz_PP;
  j["class_E"] = models::causal_class_name(r.class_E);
  j["class_P"] = models::causal_class_name(r.class_P);
  return j;
}

json to_json(const mass::EinsteinCrosscheck& r) {
  return {{"E_einstein", r.E_einstein},
          {"E_flux", r.E_flux},
          {"rel_deviation", r.rel_deviation},
          {"extrapolation", to_json(r.extrap)},
          {"note", r.note}};
}

json to_json(const mass::InvarianceReport& r) {
  json j;
  j["flat"] = r.flat;
  if (r.flat) {
    j["E_before"] = r.E_before;
    j["E_after"] = r.E_after;
    j["P_before"] = vec_json(r.P_before);
    j["P_after"] = vec_json(r.P_after);
    j["P_expected"] = vec_json(r.P_expected);
  } else {
    j["E_before"] = vec_json(r.E_vec_before);
    j["E_after"] = vec_json(r.E_vec_after);
    j["E_expected"] = vec_json(r.E_vec_expected);
    j["P_before"] = vec_json(r.P_vec_before);
    j["P_after"] = vec_json(r.P_vec_after);
    j["P_expected"] = vec_json(r.P_vec_expected);
  }
  j["lorentz_before"] = r.lorentz_before;
  j["lorentz_after"] = r.lorentz_after;
  j["scale"] = r.scale;
  j["E_rel_dev"] = r.E_dev;
  j["P_rel_dev"] = r.P_dev;
  j["lorentz_rel_dev"] = r.lorentz_dev;
  j["error_bars"] = r.error_bars;
  return j;
}

json to_json(const mass::MassInequalityReport& r) {
  json j;
  j["flat"] = r.flat;
  j["dec"] = to_json(r.dec);
  j["dec_pass"] = r.dec_pass;
  if (r.flat) {
    j["E"] = r.E;
    j["P_norm"] = r.P_norm;
    j["E_minus_P"] = r.E_minus_P;
    j["causal_class"] = models::causal_class_name(r.causal);
  } else {
    j["class_E"] = models::causal_class_name(r.class_E);
    j["class_P"] = models::causal_class_name(r.class_P);
  }
  j["statement"] = r.statement;
  return j;
}

json envelope(const std::string& command, const json& descriptor,
              const json& payload, double wall_ms) {
  json j;
  j["tool"] = "decmass";
  j["version"] = kToolVersion;
  j["command"] = command;
  j["descriptor"] = descriptor;
  j["payload"] = payload;
  j["timing"] = {{"wall_ms", wall_ms}};
  return j;
}

std::string mass_csv(const mass::FlatMassReport& r) {
  std::ostringstream os;
  os << "r,flux_E,flux_corner";
  const int np = r.P.size();
  for (int A = 1; A <= np; ++A) os << ",flux_P_" << A;
  os << ",extrapolant\n";
  for (size_t i = 0; i < r.radii.size(); ++i) {
    os << fmt(r.radii[i]) << "," << fmt(r.flux_E_hemi[i]) << ","
       << fmt(r.flux_E_corner[i]);
    for (int A = 0; A < np; ++A) os << "," << fmt(r.flux_P[i][A]);
    const auto& ex = r.E_extrap.extrapolants;
    os << "," << (i == 0 ? "" : fmt(ex[i - 1])) << "\n";
  }
  return os.str();
}

std::string mass_csv(const mass::HypMassReport& r) {
  std::ostringstream os;
  const int n = static_cast<int>(r.E.size());
  os << "r";
  for (int a = 0; a < n; ++a) os << ",flux_E" << a << ",flux_corner" << a;
  for (int a = 0; a < n; ++a) os << ",flux_P_" << a;
  os << ",extrapolant_E0\n";
  const auto& radii = r.E_details[0].radii;
  for (size_t i = 0; i < radii.size(); ++i) {
    os << fmt(radii[i]);
    for (int a = 0; a < n; ++a)
      os << "," << fmt(r.E_details[a].flux_hemi[i]) << ","
         << fmt(r.E_details[a].flux_corner[i]);
    for (int a = 0; a < n; ++a)
      os << "," << fmt(r.P_details[a].flux_hemi[i] + r.P_details[a].flux_corner[i]);
    const auto& ex = r.E_details[0].extrap.extrapolants;
    os << "," << (i == 0 ? "" : fmt(ex[i - 1])) << "\n";
  }
  return os.str();
}

}  // namespace report
}  // namespace decmass
