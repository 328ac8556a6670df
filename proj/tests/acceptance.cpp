// Acceptance suite: end-to-end criteria with one PASS/FAIL line each.
// Exit code 0 iff every criterion holds at its stated tolerance.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>

#include "decmass/clifford.hpp"
#include "decmass/constraints.hpp"
#include "decmass/datasets.hpp"
#include "decmass/mass.hpp"
#include "decmass/report.hpp"
#include "decmass/verify.hpp"

using namespace decmass;
using models::CausalClass;

namespace {

int g_failures = 0;

void line(bool ok, int idx, const std::string& what) {
  std::printf("%s  criterion %d: %s\n", ok ? "PASS" : "FAIL", idx, what.c_str());
  if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

mass::MassOptions standard_opts() {
  mass::MassOptions o;
  o.radii = {16, 32, 64, 128};
  o.order_polar = 48;
  o.order_azimuth = 96;
  return o;
}

char buf[512];

// ---------------------------------------------------------------- criteria

void criterion_1_schwarzschild() {
  const auto t0 = std::chrono::steady_clock::now();
  auto d = data::default_descriptor("schwarzschild");
  d.params["mass"] = 1.0;
  const auto ds = data::build_dataset(d);
  const auto opt = standard_opts();
  const auto rep = mass::energy_momentum_flat(ds, opt);
  const double e8pi = 8.0 * M_PI;
  const bool e_ok = std::abs(rep.E - e8pi) <= 0.005 * e8pi;
  const bool p_ok = rep.P.norm() <= 1e-6 * rep.E;

  Vec lo = Vec::Constant(3, -6.0), hi = Vec::Constant(3, 6.0);
  lo(2) = 0.0;
  std::vector<Vec> interior, boundary;
  constraints::box_samples(ds.domain, lo, hi, 4, &interior, &boundary);
  const auto dec = constraints::check_dec(ds, interior, boundary, 1e-8);
  const auto audit = constraints::decay_audit(ds, {10, 20, 40, 80});

  auto copt = opt;
  copt.order_polar = 24;
  copt.order_azimuth = 48;
  const auto cross = mass::einstein_energy_crosscheck(ds, copt);
  const bool cross_ok = cross.rel_deviation <= 0.01;
  const double secs = seconds_since(t0);
  std::snprintf(buf, sizeof buf,
                "schwarzschild E=%.6f (8pi=%.6f, rel %.2e), |P|/E=%.2e, DEC %s, "
                "decay %s, einstein dev=%.2e, %.1fs",
                rep.E, e8pi, std::abs(rep.E - e8pi) / e8pi, rep.P.norm() / rep.E,
                dec.pass() ? "pass" : "FAIL", audit.pass() ? "pass" : "FAIL",
                cross.rel_deviation, secs);
  line(e_ok && p_ok && dec.pass() && audit.pass() && cross_ok && secs <= 30.0,
       1, buf);
}

void criterion_2_bowen_york() {
  const auto t0 = std::chrono::steady_clock::now();
  auto d = data::default_descriptor("bowen-york");
  d.params["momentum"] = {0.1, 0.0, 0.0};
  const auto ds = data::build_dataset(d);
  const auto rep = mass::energy_momentum_flat(ds, standard_opts());
  const double p8pi = 8.0 * M_PI * 0.1;
  const bool p_ok = std::abs(rep.P(0) - p8pi) <= 0.01 * p8pi &&
                    std::abs(rep.P(1)) <= 1e-8;
  const bool e_ok = std::abs(rep.E) <= 1e-6;

  const auto ineq = mass::mass_inequality_report(ds, standard_opts());
  const bool dec_violation = !ineq.dec_pass && ineq.dec.interior_worst <= -1e-4;
  const bool flagged = ineq.statement.find("violated") != std::string::npos;
  const double secs = seconds_since(t0);
  std::snprintf(buf, sizeof buf,
                "bowen-york P1=%.6f (8pi/10=%.6f), E=%.2e, worst interior "
                "margin=%.2e, hypothesis-failure flagged=%s, %.1fs",
                rep.P(0), p8pi, rep.E, ineq.dec.interior_worst,
                flagged ? "yes" : "NO", secs);
  line(p_ok && e_ok && dec_violation && flagged && secs <= 30.0, 2, buf);
}

void criterion_3_invariance() {
  mass::MassOptions opt;
  opt.radii = {16, 32, 64};
  opt.order_polar = 32;
  opt.order_azimuth = 64;
  const auto by = data::build_dataset(data::default_descriptor("bowen-york"));
  const auto rot = models::flat_rotation(by.domain, 0, 1, M_PI / 6.0);
  const auto inv = mass::invariance_test(by, rot, opt);
  const bool flat_ok = inv.E_dev <= 1e-8 && inv.P_dev <= 1e-6;

  const auto ads = data::build_dataset(data::default_descriptor("ads-schwarzschild"));
  const auto boost = models::hyperbolic_boost(ads.domain, 0, 0.4);
  const auto inv2 = mass::invariance_test(ads, boost, opt);
  const bool hyp_ok = inv2.lorentz_dev <= 1e-6;
  std::snprintf(buf, sizeof buf,
                "invariance: rotation E dev=%.2e P dev=%.2e; boost <<E,E>> "
                "dev=%.2e",
                inv.E_dev, inv.P_dev, inv2.lorentz_dev);
  line(flat_ok && hyp_ok, 3, buf);
}

void criterion_4_hyperbolic() {
  const auto opt = standard_opts();
  const auto triv = data::build_dataset(data::default_descriptor("hyperbolic-trivial"));
  const auto rep0 = mass::energy_momentum_pair(triv, opt);
  const bool triv_ok = rep0.E.cwiseAbs().maxCoeff() <= 1e-7 &&
                       rep0.P.cwiseAbs().maxCoeff() <= 1e-7;

  auto d = data::default_descriptor("ads-schwarzschild");
  d.params["mass"] = 0.1;
  const auto ads = data::build_dataset(d);
  const auto rep1 = mass::energy_momentum_pair(ads, opt);
  const double c3m = 8.0 * M_PI * 0.1;  // c3 = 8 pi from the symbolic oracle
  const bool ads_ok = std::abs(rep1.E(0) - c3m) <= 0.01 * c3m &&
                      rep1.E.tail(2).cwiseAbs().maxCoeff() <= 1e-6 &&
                      rep1.class_E == CausalClass::TimelikeFuture &&
                      rep1.P.cwiseAbs().maxCoeff() <= 1e-8;

  const auto gauge = data::build_dataset(data::default_descriptor("gauge-perturbation"));
  const auto rep2 = mass::energy_momentum_pair(gauge, opt);
  bool gauge_ok = true;
  for (int a = 0; a < 3; ++a) {
    gauge_ok = gauge_ok &&
               std::abs(rep2.E(a)) <= std::max(10.0 * rep2.E_error(a), 1e-6);
    gauge_ok = gauge_ok &&
               std::abs(rep2.P(a)) <= std::max(10.0 * rep2.P_error(a), 1e-6);
  }
  std::snprintf(buf, sizeof buf,
                "hyperbolic: (b,0) max |component|=%.1e; ads E0=%.6f "
                "(c3*m=%.6f) class=%s; gauge max=%.1e (bars %.1e)",
                std::max(rep0.E.cwiseAbs().maxCoeff(), rep0.P.cwiseAbs().maxCoeff()),
                rep1.E(0), c3m, models::causal_class_name(rep1.class_E).c_str(),
                std::max(rep2.E.cwiseAbs().maxCoeff(), rep2.P.cwiseAbs().maxCoeff()),
                rep2.E_error.maxCoeff());
  line(triv_ok && ads_ok && gauge_ok, 4, buf);
}

void criterion_5_identities() {
  const auto dec = verify::run_suite("decomposition", 11);
  const auto shift = verify::run_suite("shift", 11);
  const auto div = verify::run_suite("divergence", 11, 1e-3);
  const auto gauge = verify::run_suite("gauge-charge", 11, 1e-3);
  const auto wz = verify::run_suite("weitzenbock", 11, 1e-3);
  const auto kdev = verify::run_suite("killing-dev", 11, 1e-3);
  double min_order = 10.0;
  for (const auto* s : {&div, &gauge, &wz})
    for (const auto& r : s->rows)
      if (r.has_order) min_order = std::min(min_order, r.order);
  std::snprintf(buf, sizeof buf,
                "identities: decomposition %s, shift %s, divergence %s, "
                "gauge-charge %s, weitzenbock %s, killing-dev %s, min observed "
                "order %.3f",
                dec.pass ? "pass" : "FAIL", shift.pass ? "pass" : "FAIL",
                div.pass ? "pass" : "FAIL", gauge.pass ? "pass" : "FAIL",
                wz.pass ? "pass" : "FAIL", kdev.pass ? "pass" : "FAIL",
                min_order);
  line(dec.pass && shift.pass && div.pass && gauge.pass && wz.pass &&
           kdev.pass && min_order >= 1.9,
       5, buf);
}

void criterion_6_spectra() {
  const auto spectra = verify::run_suite("clifford-spectra", 11);
  // H + U is PSD exactly when the tangential margin is nonnegative
  const auto rep = cliff::build_rep(3);
  Rng rng(23);
  bool threshold_ok = true;
  for (int t = 0; t < 200; ++t) {
    Vec pt(2);
    for (int i = 0; i < 2; ++i) pt(i) = rng.uniform(-2, 2);
    const double H = rng.uniform(-3, 3);
    const double margin = H - pt.norm();
    if (std::abs(margin) < 1e-9) continue;
    const auto U = cliff::operator_U(rep, pt);
    Eigen::SelfAdjointEigenSolver<MatC> es(
        H * MatC::Identity(rep.N, rep.N) + U.matrix);
    const bool psd = es.eigenvalues().minCoeff() >= -1e-12;
    threshold_ok = threshold_ok && (psd == (margin >= 0));
  }
  // saturated case
  {
    Vec pt(2);
    pt << 3, 4;
    const auto U = cliff::operator_U(rep, pt);
    Eigen::SelfAdjointEigenSolver<MatC> es(
        5.0 * MatC::Identity(rep.N, rep.N) + U.matrix);
    threshold_ok =
        threshold_ok && std::abs(es.eigenvalues().minCoeff()) <= 1e-12;
  }
  std::snprintf(buf, sizeof buf,
                "spectra: closed forms %s, H+U PSD iff tangential margin >= 0 %s",
                spectra.pass ? "pass" : "FAIL", threshold_ok ? "pass" : "FAIL");
  line(spectra.pass && threshold_ok, 6, buf);
}

void criterion_7_boundary_conditions() {
  const auto rep = cliff::build_rep(3);
  const MatC mitP = cliff::boundary_projector(rep, cliff::ProjectorKind::MitPlus);
  const MatC mitM = cliff::boundary_projector(rep, cliff::ProjectorKind::MitMinus);
  const MatC chiP = cliff::boundary_projector(rep, cliff::ProjectorKind::ChiPlus);
  const MatC chiM = cliff::boundary_projector(rep, cliff::ProjectorKind::ChiMinus);
  Rng rng(29);
  double worst_mit = 0, worst_chi = 0, worst_margin = 0;
  bool chi_rel = true;
  for (int t = 0; t < 1000; ++t) {
    VecC raw(rep.N);
    for (int i = 0; i < rep.N; ++i)
      raw(i) = std::complex<double>(rng.uniform(-1, 1), rng.uniform(-1, 1));
    const VecC psi = (t % 2 ? mitP : mitM) * raw;
    // (rho psi, psi) in the indefinite pairing
    worst_mit = std::max(
        worst_mit, std::abs((psi.adjoint() *
                             (rep.gamma[0] * (rep.gamma[3] * psi)))(0)));
    const VecC chi = (t % 2 ? chiP : chiM) * raw;
    for (int A = 1; A <= 2; ++A)
      worst_chi = std::max(
          worst_chi,
          std::abs((chi.adjoint() * (rep.gamma[0] * (rep.gamma[A] * chi)))(0)));
    worst_chi = std::max(worst_chi,
                         std::abs((chi.adjoint() * (rep.gamma[3] * chi))(0)));
    const auto kc = cliff::killing_charge(rep, raw);
    worst_margin = std::min(worst_margin, kc.margin);
    // equality behavior on the chirality eigenspace: W = +/- V e_n
    const auto kcp = cliff::killing_charge(rep, chi);
    const double sgn = t % 2 ? 1.0 : -1.0;
    chi_rel = chi_rel && std::abs(kcp.W(2) - sgn * kcp.V) <= 1e-12 &&
              kcp.W.head(2).cwiseAbs().maxCoeff() <= 1e-12;
  }
  std::snprintf(buf, sizeof buf,
                "boundary conditions: MIT worst=%.1e, CHI worst=%.1e, charge "
                "margin worst=%.1e, W=+/-V e_n on CHI %s",
                worst_mit, worst_chi, worst_margin, chi_rel ? "pass" : "FAIL");
  line(worst_mit <= 1e-13 && worst_chi <= 1e-13 && worst_margin >= -1e-13 &&
           chi_rel,
       7, buf);
}

void criterion_8_determinism(double elapsed) {
  // byte-determinism of seeded report payloads
  const auto ds = data::build_dataset(data::default_descriptor("bowen-york"));
  mass::MassOptions opt;
  opt.radii = {12, 24};
  opt.order_polar = 12;
  opt.order_azimuth = 24;
  const std::string a = report::to_json(mass::energy_momentum_flat(ds, opt)).dump();
  const std::string b = report::to_json(mass::energy_momentum_flat(ds, opt)).dump();
  const std::string s1 = verify::to_json(verify::run_suite("shift", 5)).dump();
  const std::string s2 = verify::to_json(verify::run_suite("shift", 5)).dump();
  const bool deterministic = a == b && s1 == s2;
  std::snprintf(buf, sizeof buf,
                "suite wall time %.1fs (budget 300s), reports byte-deterministic=%s",
                elapsed, deterministic ? "yes" : "NO");
  line(deterministic && elapsed <= 300.0, 8, buf);
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  criterion_1_schwarzschild();
  criterion_2_bowen_york();
  criterion_3_invariance();
  criterion_4_hyperbolic();
  criterion_5_identities();
  criterion_6_spectra();
  criterion_7_boundary_conditions();
  criterion_8_determinism(seconds_since(t0));
  std::printf("%s (%d criterion(s) failed)\n",
              g_failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
              g_failures);
  return g_failures == 0 ? 0 : 1;
}
