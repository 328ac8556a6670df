#include "decmass/mass.hpp"

#include <cmath>
#include <sstream>

namespace decmass {
namespace mass {

using constraints::ModelGeometry;
using models::Model;

std::vector<double> default_radii(const InitialDataSet& data) {
  const double scale = std::max(1.0, data.domain.r0 / 2.0);
  return {16.0 * scale, 32.0 * scale, 64.0 * scale, 128.0 * scale};
}

double default_extrap_power(const InitialDataSet& data) {
  const int n = data.domain.n;
  const double e = data.decay_exponent;
  const double s =
      data.domain.hyperbolic() ? 2.0 * e - n : 2.0 * e - (n - 2);
  return std::max(s, 0.5);
}

Extrapolation extrapolate(const std::vector<double>& radii,
                          const std::vector<double>& values, double power,
                          int window) {
  if (radii.size() != values.size() || radii.size() < 2)
    throw InputError("extrapolation needs matching radii/values, >= 2 points");
  for (size_t i = 1; i < radii.size(); ++i)
    if (radii[i] <= radii[i - 1])
      throw InputError("radii must be strictly increasing");
  Extrapolation ex;
  ex.radii = radii;
  ex.values = values;
  ex.power = power;
  for (size_t last = 1; last < radii.size(); ++last) {
    const size_t lo = last + 1 >= static_cast<size_t>(window)
                          ? last + 1 - window
                          : 0;
    // least squares for v = c0 + c1 * r^-power
    double s11 = 0, s1x = 0, sxx = 0, s1y = 0, sxy = 0;
    for (size_t i = lo; i <= last; ++i) {
      const double x = std::pow(radii[i], -power), y = values[i];
      s11 += 1;
      s1x += x;
      sxx += x * x;
      s1y += y;
      sxy += x * y;
    }
    const double det = s11 * sxx - s1x * s1x;
    const double c0 = (sxx * s1y - s1x * sxy) / det;
    ex.extrapolants.push_back(c0);
  }
  ex.value = ex.extrapolants.back();
  const size_t m = ex.extrapolants.size();
  ex.error = m >= 2 ? std::abs(ex.extrapolants[m - 1] - ex.extrapolants[m - 2])
                    : std::abs(ex.value - values.back());
  if (m >= 3) {
    const double d1 = std::abs(ex.extrapolants[m - 1] - ex.extrapolants[m - 2]);
    const double d2 = std::abs(ex.extrapolants[m - 2] - ex.extrapolants[m - 3]);
    const double floor = 1e-12 * std::max(1.0, std::abs(ex.value));
    if (d1 > 2.0 * d2 + floor && d1 > 1e-6 * std::max(1.0, std::abs(ex.value))) {
      std::ostringstream msg;
      msg << "extrapolants diverge:";
      for (double e : ex.extrapolants) msg << " " << e;
      throw ConvergenceError(msg.str());
    }
  }
  return ex;
}

namespace {

// f = g - g0: the dataset's exact closure when present, otherwise the
// pointwise difference with derivative closures propagated.
SymTensorField deviation_field(const InitialDataSet& data) {
  if (data.has_deviation()) return data.deviation;
  const SymTensorField g0 = models::reference_metric(data.domain);
  SymTensorField neg;
  neg.eval = [g0](const Vec& q) { return (-g0.eval(q)).eval(); };
  if (g0.has_deriv())
    neg.deriv = [g0](const Vec& q) {
      Tensor3 d = g0.deriv(q);
      const int nn = d.dim();
      Tensor3 o(nn);
      for (int a = 0; a < nn; ++a)
        for (int i = 0; i < nn; ++i)
          for (int j = 0; j < nn; ++j) o(a, i, j) = -d(a, i, j);
      return o;
    };
  if (g0.has_deriv2())
    neg.deriv2 = [g0](const Vec& q) {
      Tensor4 d = g0.deriv2(q);
      const int nn = d.dim();
      Tensor4 o(nn);
      for (int a = 0; a < nn; ++a)
        for (int b = 0; b < nn; ++b)
          for (int i = 0; i < nn; ++i)
            for (int j = 0; j < nn; ++j) o(a, b, i, j) = -d(a, b, i, j);
      return o;
    };
  return add_fields(data.g, neg);
}

MassOptions fill_defaults(const InitialDataSet& data, MassOptions opt) {
  if (opt.radii.empty()) opt.radii = default_radii(data);
  if (opt.extrap_power <= 0.0) opt.extrap_power = default_extrap_power(data);
  return opt;
}

}  // namespace

FlatMassReport energy_momentum_flat(const InitialDataSet& data,
                                    const MassOptions& opt_in) {
  if (data.domain.model != Model::Flat)
    throw InputError("energy_momentum_flat requires a flat-model dataset");
  const MassOptions opt = fill_defaults(data, opt_in);
  const int n = data.domain.n;
  const SymTensorField f = deviation_field(data);
  FlatMassReport rep;
  rep.radii = opt.radii;
  for (double r : opt.radii) {
    const HemisphereRule rule =
        build_hemisphere_rule(data.domain, r, opt.order_polar, opt.order_azimuth);
    std::vector<double> acc_E(rule.nodes.size());
    std::vector<std::vector<double>> acc_P(
        n - 1, std::vector<double>(rule.nodes.size()));
    for (size_t k = 0; k < rule.nodes.size(); ++k) {
      const Vec& p = rule.nodes[k];
      const Vec mu = p / p.norm();
      const Tensor3 df = deriv_of(f, p, opt.fd);
      // (div_delta f - d tr_delta f)(mu)
      double val = 0;
      for (int j = 0; j < n; ++j) {
        double s = 0;
        for (int i = 0; i < n; ++i) s += df(i, i, j) - df(j, i, i);
        val += s * mu(j);
      }
      acc_E[k] = val * rule.weights[k];
      const Mat hm = data.h.eval(p);
      const double trh = hm.trace();
      const Vec hmu = hm * mu;
      for (int A = 0; A < n - 1; ++A)
        acc_P[A][k] = 2.0 * (hmu(A) - trh * mu(A)) * rule.weights[k];
    }
    rep.flux_E_hemi.push_back(pairwise_sum(acc_E));
    std::vector<double> acc_corner(rule.corner_nodes.size());
    for (size_t k = 0; k < rule.corner_nodes.size(); ++k) {
      const Vec& p = rule.corner_nodes[k];
      const Vec theta = p / p.norm();
      const Mat fm = f.eval(p);
      acc_corner[k] = fm.row(n - 1).dot(theta) * rule.corner_weights[k];
    }
    rep.flux_E_corner.push_back(pairwise_sum(acc_corner));
    std::vector<double> pa(n - 1);
    for (int A = 0; A < n - 1; ++A) pa[A] = pairwise_sum(acc_P[A]);
    rep.flux_P.push_back(pa);
  }
  std::vector<double> totals_E;
  for (size_t i = 0; i < opt.radii.size(); ++i)
    totals_E.push_back(rep.flux_E_hemi[i] + rep.flux_E_corner[i]);
  rep.E_extrap = extrapolate(opt.radii, totals_E, opt.extrap_power);
  rep.E = rep.E_extrap.value;
  rep.E_error = rep.E_extrap.error;
  rep.P = Vec(n - 1);
  rep.P_error = 0;
  for (int A = 0; A < n - 1; ++A) {
    std::vector<double> vals;
    for (size_t i = 0; i < opt.radii.size(); ++i) vals.push_back(rep.flux_P[i][A]);
    Extrapolation ex = extrapolate(opt.radii, vals, opt.extrap_power);
    rep.P(A) = ex.value;
    rep.P_error = std::max(rep.P_error, ex.error);
    rep.P_extrap.push_back(std::move(ex));
  }
  rep.lorentz_sq = -rep.E * rep.E + rep.P.squaredNorm();
  Vec ep(n);
  ep(0) = rep.E;
  ep.tail(n - 1) = rep.P;
  rep.causal = models::causal_classify(
      ep, std::max(1e-12, 10.0 * (rep.E_error + rep.P_error) /
                              std::max(1.0, ep.norm())));
  rep.adm_normalized_E = rep.E / ((n - 1) * unit_sphere_area(n));
  return rep;
}

HypMassValue mass_functional_hyp(const InitialDataSet& data,
                                 const ScalarField& V, const VectorField& W,
                                 const MassOptions& opt_in) {
  if (data.domain.model != Model::HyperbolicPolar)
    throw InputError("mass_functional_hyp requires hyperbolic-polar data");
  const MassOptions opt = fill_defaults(data, opt_in);
  const int n = data.domain.n;
  const SymTensorField f = deviation_field(data);
  HypMassValue out;
  out.radii = opt.radii;
  for (double r : opt.radii) {
    const HemisphereRule rule =
        build_hemisphere_rule(data.domain, r, opt.order_polar, opt.order_azimuth);
    std::vector<double> acc(rule.nodes.size());
    for (size_t k = 0; k < rule.nodes.size(); ++k) {
      const Vec& p = rule.nodes[k];
      const Vec U = constraints::charge_density(data.domain, f, data.h, V, W, p,
                                                opt.fd);
      // outward b-unit normal of the coordinate sphere
      const Vec mu = std::sqrt(1.0 + p.squaredNorm()) * p / p.norm();
      acc[k] = U.dot(mu) * rule.weights[k];
    }
    out.flux_hemi.push_back(pairwise_sum(acc));
    std::vector<double> acc_c(rule.corner_nodes.size());
    for (size_t k = 0; k < rule.corner_nodes.size(); ++k) {
      const Vec& p = rule.corner_nodes[k];
      // rho_b = d_{y_n} exactly on {y_n = 0}; theta = mu restricted
      const Vec theta = std::sqrt(1.0 + p.squaredNorm()) * p / p.norm();
      const Mat fm = f.eval(p);
      acc_c[k] = V.eval(p) * fm.row(n - 1).dot(theta) * rule.corner_weights[k];
    }
    out.flux_corner.push_back(pairwise_sum(acc_c));
  }
  std::vector<double> totals;
  for (size_t i = 0; i < opt.radii.size(); ++i)
    totals.push_back(out.flux_hemi[i] + out.flux_corner[i]);
  out.extrap = extrapolate(opt.radii, totals, opt.extrap_power);
  out.value = out.extrap.value;
  out.error = out.extrap.error;
  return out;
}

HypMassReport energy_momentum_pair(const InitialDataSet& data,
                                   const MassOptions& opt_in) {
  const MassOptions opt = fill_defaults(data, opt_in);
  const int n = data.domain.n;
  const auto pots = models::static_potentials(data.domain);
  const auto kills = models::killing_basis(data.domain);
  HypMassReport rep;
  rep.E = Vec(n);
  rep.P = Vec(n);
  rep.E_error = Vec(n);
  rep.P_error = Vec(n);
  const VectorField w0 = zero_vector_field();
  const ScalarField v0 = constant_scalar(0.0);
  for (int a = 0; a < n; ++a) {
    HypMassValue ev = mass_functional_hyp(data, pots[a].field, w0, opt);
    rep.E(a) = ev.value;
    rep.E_error(a) = ev.error;
    rep.E_details.push_back(std::move(ev));
    HypMassValue pv = mass_functional_hyp(data, v0, kills[a].field, opt);
    rep.P(a) = pv.value;
    rep.P_error(a) = pv.error;
    rep.P_details.push_back(std::move(pv));
  }
  rep.lorentz_EE = models::lorentz_inner(rep.E, rep.E);
  rep.lorentz_PP = models::lorentz_inner(rep.P, rep.P);
  const double tolE =
      std::max(1e-12, 10.0 * rep.E_error.maxCoeff() / std::max(1.0, rep.E.norm()));
  const double tolP =
      std::max(1e-12, 10.0 * rep.P_error.maxCoeff() / std::max(1.0, rep.P.norm()));
  rep.class_E = models::causal_classify(rep.E, tolE);
  rep.class_P = models::causal_classify(rep.P, tolP);
  return rep;
}

EinsteinCrosscheck einstein_energy_crosscheck(const InitialDataSet& data,
                                              const MassOptions& opt_in) {
  if (data.domain.model != Model::Flat)
    throw InputError("einstein_energy_crosscheck requires flat-model data");
  const MassOptions opt = fill_defaults(data, opt_in);
  const int n = data.domain.n;
  const double dn = 2.0 / (2.0 - n);
  std::vector<double> totals;
  for (double r : opt.radii) {
    const HemisphereRule rule =
        build_hemisphere_rule(data.domain, r, opt.order_polar, opt.order_azimuth);
    std::vector<double> acc(rule.nodes.size());
    for (size_t k = 0; k < rule.nodes.size(); ++k) {
      const Vec& p = rule.nodes[k];
      const geom::EinsteinNewton en =
          geom::einstein_and_newton(data.g, p, opt.fd, false);
      const Vec mu = p / p.norm();
      acc[k] = p.dot(en.einstein * mu) * rule.weights[k];
    }
    double total = pairwise_sum(acc);
    std::vector<double> acc_c(rule.corner_nodes.size());
    for (size_t k = 0; k < rule.corner_nodes.size(); ++k) {
      const Vec& p = rule.corner_nodes[k];
      const geom::EinsteinNewton en =
          geom::einstein_and_newton(data.g, p, opt.fd, true);
      const Vec theta = p / p.norm();
      double s = 0;
      for (int A = 0; A < n - 1; ++A)
        for (int B = 0; B < n - 1; ++B) s += p(A) * en.newton(A, B) * theta(B);
      acc_c[k] = s * rule.corner_weights[k];
    }
    total -= pairwise_sum(acc_c);
    totals.push_back(dn * total);
  }
  EinsteinCrosscheck out;
  out.extrap = extrapolate(opt.radii, totals, opt.extrap_power);
  out.E_einstein = out.extrap.value;
  out.E_flux = energy_momentum_flat(data, opt).E;
  out.rel_deviation = std::abs(out.E_einstein - out.E_flux) /
                      std::max(1.0, std::abs(out.E_flux));
  out.note =
      "Einstein-tensor flux converges more slowly than the charge flux; "
      "compare at matched radii";
  return out;
}

InvarianceReport invariance_test(const InitialDataSet& data,
                                 const models::Isometry& A,
                                 const MassOptions& opt_in) {
  const MassOptions opt = fill_defaults(data, opt_in);
  const InitialDataSet pulled = models::isometry_apply(A, data);
  InvarianceReport rep;
  if (data.domain.model == Model::Flat) {
    rep.flat = true;
    const FlatMassReport before = energy_momentum_flat(data, opt);
    const FlatMassReport after = energy_momentum_flat(pulled, opt);
    rep.E_before = before.E;
    rep.E_after = after.E;
    rep.P_before = before.P;
    rep.P_after = after.P;
    // pullback by x -> Rx turns m(0, d_A) into m(0, R d_A): P' = R^T P
    rep.P_expected = A.basis_action.transpose() * before.P;
    rep.scale = std::max(1.0, std::hypot(before.E, before.P.norm()));
    rep.E_dev = std::abs(after.E - before.E) / rep.scale;
    rep.P_dev = (after.P - rep.P_expected).norm() / rep.scale;
    rep.lorentz_before = -before.E * before.E + before.P.squaredNorm();
    rep.lorentz_after = -after.E * after.E + after.P.squaredNorm();
    rep.lorentz_dev =
        std::abs(rep.lorentz_after - rep.lorentz_before) / (rep.scale * rep.scale);
    rep.error_bars = before.E_error + after.E_error + before.P_error +
                     after.P_error;
  } else {
    rep.flat = false;
    const HypMassReport before = energy_momentum_pair(data, opt);
    const HypMassReport after = energy_momentum_pair(pulled, opt);
    rep.E_vec_before = before.E;
    rep.E_vec_after = after.E;
    rep.P_vec_before = before.P;
    rep.P_vec_after = after.P;
    // V_(a) o A^{-1} = (B^{-1})_{ab} V_(b), B^{-1} = eta B^T eta
    const int n = data.domain.n;
    Mat eta = Mat::Identity(n, n);
    eta(0, 0) = -1.0;
    const Mat Binv = eta * A.basis_action.transpose() * eta;
    rep.E_vec_expected = Binv * before.E;
    rep.P_vec_expected = Binv * before.P;
    rep.scale = std::max(1.0, std::hypot(before.E.norm(), before.P.norm()));
    rep.E_dev = (after.E - rep.E_vec_expected).norm() / rep.scale;
    rep.P_dev = (after.P - rep.P_vec_expected).norm() / rep.scale;
    rep.lorentz_before = before.lorentz_EE;
    rep.lorentz_after = after.lorentz_EE;
    rep.lorentz_dev =
        std::abs(rep.lorentz_after - rep.lorentz_before) / (rep.scale * rep.scale);
    rep.error_bars = before.E_error.sum() + after.E_error.sum() +
                     before.P_error.sum() + after.P_error.sum();
  }
  return rep;
}

MassInequalityReport mass_inequality_report(const InitialDataSet& data,
                                            const MassOptions& opt_in,
                                            int dec_grid) {
  const MassOptions opt = fill_defaults(data, opt_in);
  const int n = data.domain.n;
  MassInequalityReport rep;
  // DEC sampling box in the near region
  const double lo_r = data.domain.model == Model::HyperbolicBall ? -0.5
                                                                 : -3.0 * data.domain.r0;
  const double hi_r = -lo_r;
  Vec lo = Vec::Constant(n, lo_r), hi = Vec::Constant(n, hi_r);
  lo(n - 1) = 0.0;
  std::vector<Vec> interior, boundary;
  constraints::box_samples(data.domain, lo, hi, dec_grid, &interior, &boundary);
  rep.dec = constraints::check_dec(data, interior, boundary, 1e-9, opt.fd);
  rep.dec_pass = rep.dec.pass();
  if (data.domain.model == Model::Flat) {
    rep.flat = true;
    const FlatMassReport m = energy_momentum_flat(data, opt);
    rep.E = m.E;
    rep.P_norm = m.P.norm();
    rep.E_minus_P = m.E - rep.P_norm;
    rep.causal = m.causal;
    if (!rep.dec_pass)
      rep.statement =
          "dominant energy condition fails at sampled points: the positive "
          "mass hypotheses are violated and E >= |P| is not expected";
    else if (rep.E_minus_P >= 0)
      rep.statement = "E - |P| >= 0, consistent with the mass inequality";
    else
      rep.statement =
          "E - |P| < 0 despite DEC passing on samples: inspect decay and "
          "sampling";
  } else {
    rep.flat = false;
    const HypMassReport m = energy_momentum_pair(data, opt);
    rep.class_E = m.class_E;
    rep.class_P = m.class_P;
    rep.E = m.E(0);
    auto causal_ok = [](models::CausalClass c) {
      return c == models::CausalClass::Zero ||
             c == models::CausalClass::TimelikeFuture ||
             c == models::CausalClass::NullFuture;
    };
    if (!rep.dec_pass)
      rep.statement =
          "dominant energy condition fails at sampled points: the positive "
          "mass hypotheses are violated and causal future-directed (E,P) is "
          "not expected";
    else if (causal_ok(m.class_E) && causal_ok(m.class_P))
      rep.statement =
          "energy and momentum vectors are causal and future directed, "
          "consistent with the mass theorem";
    else
      rep.statement =
          "causal classification violates the theorem conclusion despite DEC "
          "passing on samples: inspect decay and sampling";
  }
  return rep;
}

}  // namespace mass
}  // namespace decmass
