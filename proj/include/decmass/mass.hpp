#pragma once

#include "decmass/constraints.hpp"
#include "decmass/quadrature.hpp"

namespace decmass {
namespace mass {

using models::InitialDataSet;

struct MassOptions {
  std::vector<double> radii;    // empty -> default {16,32,64,128} * r0-scale
  int order_polar = 48;
  int order_azimuth = 96;
  double extrap_power = 0.0;    // 0 -> default 2*tau-(n-2) / 2*kappa-n
  FdOptions fd;
};

std::vector<double> default_radii(const InitialDataSet& data);
double default_extrap_power(const InitialDataSet& data);

struct Extrapolation {
  std::vector<double> radii;
  std::vector<double> values;        // per-radius flux totals
  std::vector<double> extrapolants;  // running least-squares limits
  double value = 0.0;
  double error = 0.0;  // |difference of the last two extrapolants|
  double power = 1.0;
};
/// Least-squares fit of c0 + c1 r^{-power} over the trailing window; throws
/// ConvergenceError when successive extrapolants diverge.
Extrapolation extrapolate(const std::vector<double>& radii,
                          const std::vector<double>& values, double power,
                          int window = 4);

struct FlatMassReport {
  std::vector<double> radii;
  std::vector<double> flux_E_hemi, flux_E_corner;  // per radius
  std::vector<std::vector<double>> flux_P;         // [radius][A]
  Extrapolation E_extrap;
  std::vector<Extrapolation> P_extrap;
  double E = 0.0;
  Vec P;
  double E_error = 0.0, P_error = 0.0;
  double lorentz_sq = 0.0;  // -E^2 + |P|^2
  models::CausalClass causal = models::CausalClass::Zero;
  double adm_normalized_E = 0.0;  // E / ((n-1) omega_{n-1}); comparison only
};
FlatMassReport energy_momentum_flat(const InitialDataSet& data,
                                    const MassOptions& opt = {});

struct HypMassValue {
  std::vector<double> radii;
  std::vector<double> flux_hemi, flux_corner;
  Extrapolation extrap;
  double value = 0.0, error = 0.0;
};
/// Mass functional m_(g,h,F)(V,W) on a hyperbolic-polar dataset.
HypMassValue mass_functional_hyp(const InitialDataSet& data,
                                 const ScalarField& V, const VectorField& W,
                                 const MassOptions& opt = {});

struct HypMassReport {
  Vec E, P;  // E_a = m(V_(a),0), P_a = m(0, W_(a)), a = 0..n-1
  Vec E_error, P_error;
  std::vector<HypMassValue> E_details, P_details;
  double lorentz_EE = 0.0, lorentz_PP = 0.0;
  models::CausalClass class_E = models::CausalClass::Zero;
  models::CausalClass class_P = models::CausalClass::Zero;
};
HypMassReport energy_momentum_pair(const InitialDataSet& data,
                                   const MassOptions& opt = {});

struct EinsteinCrosscheck {
  Extrapolation extrap;      // of d_n (G-flux - N-flux)
  double E_einstein = 0.0;
  double E_flux = 0.0;
  double rel_deviation = 0.0;
  std::string note;
};
/// Recompute E from Einstein/Newton-tensor fluxes (flat data) and compare
/// with energy_momentum_flat.
EinsteinCrosscheck einstein_energy_crosscheck(const InitialDataSet& data,
                                              const MassOptions& opt = {});

struct InvarianceReport {
  bool flat = true;
  // flat: E/P before-after; expected P from the isometry's block action
  double E_before = 0, E_after = 0;
  Vec P_before, P_after, P_expected;
  // hyperbolic: full vectors and Lorentz norms
  Vec E_vec_before, E_vec_after, E_vec_expected;
  Vec P_vec_before, P_vec_after, P_vec_expected;
  double lorentz_before = 0, lorentz_after = 0;
  double scale = 1.0;        // max(1, |(E,P)|)
  double E_dev = 0, P_dev = 0, lorentz_dev = 0;  // relative to `scale`
  double error_bars = 0.0;   // sum of extrapolation error estimates
};
InvarianceReport invariance_test(const InitialDataSet& data,
                                 const models::Isometry& A,
                                 const MassOptions& opt = {});

struct MassInequalityReport {
  bool flat = true;
  bool dec_pass = false;
  constraints::DecReport dec;
  // flat
  double E = 0, P_norm = 0, E_minus_P = 0;
  models::CausalClass causal = models::CausalClass::Zero;
  // hyperbolic
  models::CausalClass class_E = models::CausalClass::Zero;
  models::CausalClass class_P = models::CausalClass::Zero;
  std::string statement;
};
MassInequalityReport mass_inequality_report(const InitialDataSet& data,
                                            const MassOptions& opt = {},
                                            int dec_grid = 4);

}  // namespace mass
}  // namespace decmass
