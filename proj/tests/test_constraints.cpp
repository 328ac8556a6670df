#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "decmass/constraints.hpp"
#include "decmass/datasets.hpp"
#include "decmass/verify.hpp"

using namespace decmass;
using constraints::ChartDomain;
using constraints::InitialDataSet;
using models::Model;

namespace {

Vec point3(double a, double b, double c) {
  Vec p(3);
  p << a, b, c;
  return p;
}

InitialDataSet trivial_data(Model m) {
  return data::build_dataset(data::default_descriptor(
      m == Model::Flat ? "flat-trivial" : "hyperbolic-trivial"));
}

InitialDataSet const_h_data(double c) {
  InitialDataSet ds = trivial_data(Model::Flat);
  SymTensorField h;
  h.eval = [c](const Vec& p) {
    return (c * Mat::Identity(p.size(), p.size())).eval();
  };
  h.deriv = [](const Vec& p) { return Tensor3(static_cast<int>(p.size())); };
  ds.h = h;
  ds.name = "const-h";
  return ds;
}

}  // namespace

TEST_CASE("conjugate momentum") {
  const Mat g = Mat::Identity(3, 3);
  CHECK(constraints::conjugate_momentum(g, Mat::Zero(3, 3)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((constraints::conjugate_momentum(g, g) + 2.0 * g).cwiseAbs().maxCoeff() <= 1e-15);
  Mat h = Mat::Zero(3, 3);
  h(0, 1) = h(1, 0) = 0.7;
  h(0, 0) = 1.0;
  h(1, 1) = -1.0;  // traceless
  CHECK((constraints::conjugate_momentum(g, h) - h).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("interior constraints on reference data") {
  const auto flat = trivial_data(Model::Flat);
  const auto iv = constraints::interior_constraints(flat, point3(1, 0.5, 1.5));
  CHECK(std::abs(iv.rho) <= 1e-12);
  CHECK(iv.J.cwiseAbs().maxCoeff() <= 1e-12);

  const auto hyp = trivial_data(Model::HyperbolicPolar);
  CHECK(hyp.lambda == doctest::Approx(-3.0));
  const auto iv2 = constraints::interior_constraints(hyp, point3(1.4, 0.2, 1.1));
  CHECK(std::abs(iv2.rho) <= 1e-6);
  CHECK(iv2.J_norm <= 1e-6);
}

TEST_CASE("interior constraints with constant extrinsic curvature") {
  // (delta, c delta), Lambda = 0, n = 3, c = 1: rho = (9 - 3)/2 = 3, J = 0
  const auto ds = const_h_data(1.0);
  const auto iv = constraints::interior_constraints(ds, point3(0.7, 0.2, 1.2));
  CHECK(iv.rho == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(iv.J_norm <= 1e-10);
}

TEST_CASE("boundary constraints") {
  const auto flat = trivial_data(Model::Flat);
  const auto bv = constraints::boundary_constraints(flat, point3(1, 1, 0));
  CHECK(std::abs(bv.H) <= 1e-12);
  CHECK(bv.pi_tangential.cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(std::abs(bv.pi_normal) <= 1e-12);

  const double c = 0.8;
  const auto ds = const_h_data(c);
  const auto bv2 = constraints::boundary_constraints(ds, point3(2, -1, 0));
  CHECK(std::abs(bv2.H) <= 1e-12);
  CHECK(bv2.pi_tangential.cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(bv2.pi_normal == doctest::Approx(-2.0 * c).epsilon(1e-12));

  // bowen-york: pi = h (traceless), frame = coordinate axes; pi_nA matches
  // the closed form of h directly
  const auto by = data::build_dataset(data::default_descriptor("bowen-york"));
  const Vec p = point3(1.5, -2.0, 0.0);
  const auto bv3 = constraints::boundary_constraints(by, p);
  const Mat hm = by.h.eval(p);
  CHECK(std::abs(bv3.pi_tangential(0) - hm(2, 0)) <= 1e-8);
  CHECK(std::abs(bv3.pi_tangential(1) - hm(2, 1)) <= 1e-8);
  CHECK(std::abs(bv3.pi_normal - hm(2, 2)) <= 1e-8);

  CHECK_THROWS_AS(constraints::boundary_constraints(flat, point3(1, 1, 0.2)),
                  DomainError);
}

TEST_CASE("dec check on the built-in examples") {
  const int grid = 4;
  auto sample = [&](const InitialDataSet& ds) {
    Vec lo = Vec::Constant(3, -3.0), hi = Vec::Constant(3, 3.0);
    lo(2) = 0.0;
    std::vector<Vec> interior, boundary;
    constraints::box_samples(ds.domain, lo, hi, grid, &interior, &boundary);
    return std::make_pair(interior, boundary);
  };

  const auto flat = trivial_data(Model::Flat);
  auto [i0, b0] = sample(flat);
  const auto rep0 = constraints::check_dec(flat, i0, b0);
  CHECK(rep0.pass());
  CHECK(std::abs(rep0.interior_worst) <= 1e-12);
  CHECK(std::abs(rep0.tangential_worst) <= 1e-12);
  CHECK(std::abs(rep0.normal_worst) <= 1e-12);

  auto d = data::default_descriptor("schwarzschild");
  d.r0 = 2.0;
  const auto schw = data::build_dataset(d);
  Vec lo = Vec::Constant(3, -6.0), hi = Vec::Constant(3, 6.0);
  lo(2) = 0.0;
  std::vector<Vec> si, sb;
  constraints::box_samples(schw.domain, lo, hi, grid, &si, &sb);
  const auto rep1 = constraints::check_dec(schw, si, sb, 1e-8);
  CHECK(rep1.pass());
  CHECK(rep1.interior_worst >= -1e-8);

  const auto by = data::build_dataset(data::default_descriptor("bowen-york"));
  auto [bi, bb] = sample(by);
  const auto rep2 = constraints::check_dec(by, bi, bb);
  CHECK_FALSE(rep2.interior_pass);
  CHECK(rep2.interior_worst <= -1e-4);
}

TEST_CASE("dec margins are isometry-invariant pointwise") {
  const auto by = data::build_dataset(data::default_descriptor("bowen-york"));
  const auto rot = models::flat_rotation(by.domain, 0, 1, 0.6);
  const auto pulled = models::isometry_apply(rot, by);
  Rng rng(17);
  for (int t = 0; t < 6; ++t) {
    Vec p(3);
    for (int i = 0; i < 3; ++i) p(i) = rng.uniform(1.0, 2.5);
    const auto v1 = constraints::interior_constraints(pulled, p);
    const auto v2 = constraints::interior_constraints(by, rot.apply(p));
    CHECK(std::abs((v1.rho - v1.J_norm) - (v2.rho - v2.J_norm)) <= 1e-8);
  }
}

TEST_CASE("linearized constraints: trivial and conformal cases") {
  ChartDomain dom{3, Model::Flat, 1.0};
  const auto z = zero_sym_tensor_field();
  const auto lv =
      constraints::linearized_constraints(dom, z, z, point3(1, 1, 0));
  CHECK(std::abs(lv.dpsi_scalar) <= 1e-12);
  CHECK(lv.dpsi_covector.cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(std::abs(lv.dphi_scalar) <= 1e-12);

  // f = phi delta: DPsi scalar = (1-n) Lap phi
  const ScalarField phi = data::random_bump_scalar(3, 31, 0.3);
  SymTensorField f;
  f.eval = [phi](const Vec& p) {
    return (phi.eval(p) * Mat::Identity(p.size(), p.size())).eval();
  };
  f.deriv = [phi](const Vec& p) {
    const int n = static_cast<int>(p.size());
    const Vec g = phi.grad(p);
    Tensor3 t(n);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i) t(k, i, i) = g(k);
    return t;
  };
  const Vec p = point3(0.4, -0.2, 1.0);
  const auto lv2 = constraints::linearized_constraints(dom, f, z, p);
  const double expected = (1.0 - 3.0) * phi.hess(p).trace();
  CHECK(lv2.dpsi_scalar == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("linearized map matches the nonlinear differencing oracle") {
  // DPsi(f,h) ~ [Psi(g0+tf, th) - Psi(g0-tf, -th)] / 2t with Psi = 2(rho, J)
  for (Model m : {Model::Flat, Model::HyperbolicPolar}) {
    ChartDomain dom{3, m, 1.0};
    const SymTensorField f = data::random_bump_sym(3, 101, 0.05);
    const SymTensorField h = data::random_bump_sym(3, 102, 0.05);
    const Vec p = point3(0.8, 0.3, 1.2);
    const auto lv = constraints::linearized_constraints(dom, f, h, p);
    const double t = 1e-5;
    auto psi_at = [&](double s) {
      InitialDataSet ds = trivial_data(m);
      SymTensorField fs = f, hs = h;
      auto fe = f.eval, he = h.eval;
      fs.eval = [fe, s](const Vec& q) { return (s * fe(q)).eval(); };
      fs.deriv = nullptr;
      fs.deriv2 = nullptr;
      hs.eval = [he, s](const Vec& q) { return (s * he(q)).eval(); };
      hs.deriv = nullptr;
      hs.deriv2 = nullptr;
      ds.g = add_fields(models::reference_metric(dom), fs);
      ds.h = hs;
      FdOptions o;
      o.step = 1e-3;
      return constraints::interior_constraints(ds, p, o);
    };
    const auto plus = psi_at(t), minus = psi_at(-t);
    const double dpsi1_fd = 2.0 * (plus.rho - minus.rho) / (2.0 * t);
    CHECK(lv.dpsi_scalar == doctest::Approx(dpsi1_fd).epsilon(2e-4));
    const Vec dpsi2_fd = 2.0 * (plus.J - minus.J) / (2.0 * t);
    CHECK((lv.dpsi_covector - dpsi2_fd).cwiseAbs().maxCoeff() <= 1e-4);
  }
}

TEST_CASE("charge density special cases") {
  ChartDomain flat{3, Model::Flat, 1.0};
  const auto z = zero_sym_tensor_field();
  const auto V1 = constant_scalar(1.0);
  const auto W0 = zero_vector_field();
  CHECK(constraints::charge_density(flat, z, z, V1, W0, point3(1, 0, 1))
            .cwiseAbs()
            .maxCoeff() <= 1e-14);

  // flat, V = 1, W = 0: U = div f - d tr f
  const SymTensorField f = data::random_bump_sym(3, 55, 0.2);
  const Vec p = point3(0.5, 0.1, 0.9);
  const Vec U = constraints::charge_density(flat, f, z, V1, W0, p);
  const Tensor3 df = f.deriv(p);
  Vec expected(3);
  for (int j = 0; j < 3; ++j) {
    double s = 0;
    for (int i = 0; i < 3; ++i) s += df(i, i, j) - df(j, i, i);
    expected(j) = s;
  }
  CHECK((U - expected).cwiseAbs().maxCoeff() <= 1e-12);

  // hyperbolic, f = 0, W = L_{0n}: U = 2 (W .| h - (tr_b h) W_flat)
  ChartDomain hyp{3, Model::HyperbolicPolar, 1.0};
  const SymTensorField h = data::random_bump_sym(3, 56, 0.2);
  const auto kills = models::killing_basis(hyp);
  const Vec q = point3(1.2, -0.6, 0.8);
  const Vec U2 = constraints::charge_density(hyp, z, h, constant_scalar(0.0),
                                             kills[0].field, q);
  const Mat b = models::reference_metric(hyp).eval(q);
  const Mat hm = h.eval(q);
  const Vec w = kills[0].field.eval(q);
  const double trh = (geom::inverse_metric(b) * hm).trace();
  const Vec expected2 = 2.0 * (hm * w - trh * (b * w));
  CHECK((U2 - expected2).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("adjoint constraint vanishes exactly on the advertised pairs") {
  ChartDomain flat{3, Model::Flat, 1.0};
  const auto kf = models::killing_basis(flat);
  const auto [F1, F2] = constraints::adjoint_constraint(
      flat, constant_scalar(1.0), kf[0].field, point3(1, 0.2, 0.7));
  CHECK(F1.cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(F2.cwiseAbs().maxCoeff() <= 1e-12);

  ChartDomain hyp{3, Model::HyperbolicPolar, 1.0};
  const auto pots = models::static_potentials(hyp);
  const auto kills = models::killing_basis(hyp);
  for (int a = 0; a < 3; ++a) {
    const auto [G1, G2] = constraints::adjoint_constraint(
        hyp, pots[a].field, kills[a].field, point3(0.9, 0.4, 1.3));
    CHECK(G1.cwiseAbs().maxCoeff() <= 1e-6);
    CHECK(G2.cwiseAbs().maxCoeff() <= 1e-6);
  }

  // negative control: V = |y|^2 is not static
  ScalarField notV;
  notV.eval = [](const Vec& y) { return y.squaredNorm(); };
  notV.grad = [](const Vec& y) { return (2.0 * y).eval(); };
  notV.hess = [](const Vec& y) {
    return (2.0 * Mat::Identity(y.size(), y.size())).eval();
  };
  const auto [N1, N2] = constraints::adjoint_constraint(
      hyp, notV, zero_vector_field(), point3(0.9, 0.4, 1.3));
  CHECK(N1.cwiseAbs().maxCoeff() > 1e-3);
  (void)N2;
}

TEST_CASE("divergence identity: trivial case and convergence order") {
  ChartDomain flat{3, Model::Flat, 1.0};
  const auto z = zero_sym_tensor_field();
  CHECK(constraints::verify_divergence_identity(
            flat, z, z, constant_scalar(1.0),
            models::killing_basis(flat)[0].field, point3(1, 0, 1)) <= 1e-12);

  const auto suite = verify::run_suite("divergence", 3, 1e-3);
  for (const auto& row : suite.rows) {
    INFO(row.identity, " residual=", row.residual, " order=", row.order);
    CHECK(row.pass);
  }
}

TEST_CASE("divergence identity order holds for random bump fields") {
  // spec property: order >= 1.9 under step halving across random smooth data
  ChartDomain doms[2] = {{3, Model::Flat, 1.0}, {3, Model::HyperbolicPolar, 1.0}};
  int checked = 0;
  double worst_order = 10.0, worst_res = 0.0;
  for (int c = 0; c < 100; ++c) {
    const ChartDomain& dom = doms[c % 2];
    const auto pots = models::static_potentials(dom);
    const auto kills = models::killing_basis(dom);
    const SymTensorField f = data::random_bump_sym(3, 1000 + c, 0.1);
    const SymTensorField h = data::random_bump_sym(3, 2000 + c, 0.1);
    Rng rng(3000 + c);
    Vec p(3);
    for (int i = 0; i < 3; ++i) p(i) = rng.uniform(0.4, 1.8);
    FdOptions o1, o2;
    o1.step = 1e-3;
    o2.step = 5e-4;
    const auto& V = pots[c % pots.size()].field;
    const auto& W = kills[c % kills.size()].field;
    const double r1 = constraints::verify_divergence_identity(dom, f, h, V, W, p, o1);
    const double r2 = constraints::verify_divergence_identity(dom, f, h, V, W, p, o2);
    if (r1 < 1e-9) continue;  // below the measurable truncation floor
    worst_order = std::min(worst_order, std::log2(r1 / r2));
    worst_res = std::max(worst_res, r1);
    ++checked;
  }
  CHECK(checked >= 60);
  CHECK(worst_order >= 1.9);
  CHECK(worst_res <= 1e-5);
}

TEST_CASE("gauge charge identity") {
  ChartDomain hyp{3, Model::HyperbolicPolar, 1.0};
  const auto pots = models::static_potentials(hyp);
  const auto kills = models::killing_basis(hyp);
  // zeta = 0
  CHECK(constraints::verify_gauge_charge(hyp, zero_vector_field(),
                                         pots[0].field, kills[0].field,
                                         point3(1, 0.4, 0.9)) <= 1e-12);
  const auto suite = verify::run_suite("gauge-charge", 5, 1e-3);
  for (const auto& row : suite.rows) {
    INFO(row.identity, " residual=", row.residual, " order=", row.order);
    CHECK(row.pass);
  }
  // non-tangent zeta is rejected
  VectorField off;
  off.eval = [](const Vec& p) {
    Vec v = Vec::Zero(p.size());
    v(p.size() - 1) = 1.0;
    return v;
  };
  CHECK_THROWS_AS(constraints::verify_gauge_charge(hyp, off, pots[0].field,
                                                   kills[0].field,
                                                   point3(1, 0.4, 0.9)),
                  InvalidGaugeError);
  // flat model has no gauge-charge lemma
  ChartDomain flat{3, Model::Flat, 1.0};
  CHECK_THROWS_AS(constraints::verify_gauge_charge(flat, zero_vector_field(),
                                                   constant_scalar(1.0),
                                                   zero_vector_field(),
                                                   point3(1, 0.4, 0.9)),
                  InvalidGaugeError);
}

TEST_CASE("hamiltonian density") {
  const auto flat = trivial_data(Model::Flat);
  const auto V1 = constant_scalar(1.0);
  const auto W0 = zero_vector_field();
  CHECK(std::abs(constraints::hamiltonian_density(flat, V1, W0,
                                                  point3(1, 1, 1), false)) <= 1e-12);
  CHECK(std::abs(constraints::hamiltonian_density(flat, V1, W0,
                                                  point3(1, 1, 0), true)) <= 1e-12);

  const auto schw = data::build_dataset(data::default_descriptor("schwarzschild"));
  CHECK(std::abs(constraints::hamiltonian_density(schw, V1, W0,
                                                  point3(4, 2, 3), false)) <= 1e-8);
  CHECK(std::abs(constraints::hamiltonian_density(schw, V1, W0,
                                                  point3(4, 2, 0), true)) <= 1e-7);

  const double c = 0.5;
  const auto dsc = const_h_data(c);
  CHECK(constraints::hamiltonian_density(dsc, V1, W0, point3(1, 1, 1), false) ==
        doctest::Approx(3.0 * c * c).epsilon(1e-10));
}

TEST_CASE("decay audit") {
  const std::vector<double> radii = {10, 20, 40, 80};
  const auto flat = trivial_data(Model::Flat);
  const auto a0 = constraints::decay_audit(flat, radii);
  CHECK(a0.pass());
  for (const auto& row : a0.rows) {
    CHECK(row.f0 <= 1e-12);
    CHECK(row.shell_interior <= 1e-12);
  }

  auto d = data::default_descriptor("schwarzschild");
  const auto schw = data::build_dataset(d);
  const auto a1 = constraints::decay_audit(schw, radii);
  CHECK(a1.pass());

  // slow-decay counterexample: f ~ |x|^{-0.3} profile with claimed tau = 1
  auto bad = data::default_descriptor("conformal-bump");
  bad.params["amplitude"] = 0.0;
  bad.params["tail_amplitude"] = 0.3;
  bad.params["tail_exponent"] = 0.3;
  bad.decay_exponent = 1.0;
  const auto bad_ds = data::build_dataset(bad);
  const auto a2 = constraints::decay_audit(bad_ds, radii);
  CHECK_FALSE(a2.pass());
  CHECK_FALSE(a2.sup_pass);
}

TEST_CASE("boundary linearization matches nonlinear differencing") {
  // DPhi_1 as displayed is the variation of twice the mean curvature in the
  // opposite orientation of boundary_geometry's pinned sign; DPhi_2 is the
  // variation of 2 rho .| pi. Both checked against centered differencing of
  // the nonlinear maps.
  for (Model m : {Model::Flat, Model::HyperbolicPolar}) {
    ChartDomain dom{3, m, 1.0};
    const SymTensorField f = data::random_bump_sym(3, 301, 0.05);
    const SymTensorField h = data::random_bump_sym(3, 302, 0.05);
    Vec p(3);
    p << 0.9, 0.4, 0.0;
    const auto lv = constraints::linearized_constraints(dom, f, h, p);
    const double t = 1e-5;
    auto phi_at = [&](double s) {
      InitialDataSet ds;
      ds.domain = dom;
      ds.lambda = dom.matching_lambda();
      SymTensorField fs;
      auto fe = f.eval;
      fs.eval = [fe, s](const Vec& q) { return (s * fe(q)).eval(); };
      ds.g = add_fields(models::reference_metric(dom), fs);
      SymTensorField hs;
      auto he = h.eval;
      hs.eval = [he, s](const Vec& q) { return (s * he(q)).eval(); };
      ds.h = hs;
      FdOptions o;
      o.step = 1e-3;
      const auto bv = constraints::boundary_constraints(ds, p, o);
      const Mat g = ds.g.eval(p);
      const Mat pi = constraints::conjugate_momentum(g, ds.h.eval(p));
      const auto bg = geom::boundary_geometry(ds.g, p, o);
      return std::make_pair(2.0 * bv.H, (2.0 * (pi * bg.normal)).eval());
    };
    const auto [Hp, Pp] = phi_at(t);
    const auto [Hm, Pm] = phi_at(-t);
    const double dH_fd = (Hp - Hm) / (2.0 * t);
    const Vec dP_fd = (Pp - Pm) / (2.0 * t);
    CHECK(lv.dphi_scalar == doctest::Approx(-dH_fd).epsilon(1e-5));
    CHECK((lv.dphi_covector - dP_fd).cwiseAbs().maxCoeff() <= 1e-6);
  }
}
