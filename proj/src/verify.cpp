#include "decmass/verify.hpp"

#include <cmath>
#include <sstream>

#include "decmass/clifford.hpp"
#include "decmass/constraints.hpp"
#include "decmass/mass.hpp"

namespace decmass {
namespace verify {

using models::ChartDomain;
using models::Model;

namespace {

Row make_row(const std::string& id, const std::string& sample, double res,
             double tol) {
  Row r;
  r.identity = id;
  r.sample = sample;
  r.residual = res;
  r.tolerance = tol;
  r.pass = res <= tol;
  return r;
}

Row make_order_row(const std::string& id, const std::string& sample,
                   double res_h, double res_h2, double tol, double order_floor) {
  Row r;
  r.identity = id;
  r.sample = sample;
  r.residual = res_h;
  r.tolerance = tol;
  r.has_order = true;
  r.order_floor = order_floor;
  r.order = std::log2(res_h / std::max(res_h2, 1e-300));
  r.pass = res_h <= tol && r.order >= order_floor;
  return r;
}

std::string point_str(const Vec& p) {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < p.size(); ++i) os << (i ? "," : "") << p(i);
  os << ")";
  return os.str();
}

Vec interior_point(Rng* rng, int n, double rmin, double rmax) {
  Vec p(n);
  for (;;) {
    for (int i = 0; i < n; ++i) p(i) = rng->uniform(-rmax, rmax);
    p(n - 1) = std::abs(p(n - 1)) + 0.2;
    const double r = p.norm();
    if (r >= rmin && r <= rmax) return p;
  }
}

Suite divergence_suite(uint64_t seed, double step) {
  Suite s;
  s.name = "divergence";
  const int n = 3;
  for (int model_i = 0; model_i < 2; ++model_i) {
    const Model model = model_i == 0 ? Model::Flat : Model::HyperbolicPolar;
    ChartDomain dom{n, model, 1.0};
    const auto pots = models::static_potentials(dom);
    const auto kills = models::killing_basis(dom);
    Rng rng(seed + model_i);
    for (int c = 0; c < 4; ++c) {
      const SymTensorField f = data::random_bump_sym(n, seed * 37 + c, 0.1);
      const SymTensorField h = data::random_bump_sym(n, seed * 53 + c, 0.1);
      const Vec p = interior_point(&rng, n, 0.5, 2.5);
      const ScalarField& V = pots[c % pots.size()].field;
      const VectorField& W = kills[c % kills.size()].field;
      FdOptions o1;
      o1.step = step;
      FdOptions o2;
      o2.step = 0.5 * step;
      const double r1 =
          constraints::verify_divergence_identity(dom, f, h, V, W, p, o1);
      const double r2 =
          constraints::verify_divergence_identity(dom, f, h, V, W, p, o2);
      s.rows.push_back(make_order_row(
          "div U + <(f,h),F(V,W)> = <DPsi(f,h),(V,W)> [" +
              models::model_name(model) + "]",
          point_str(p), r1, r2, 1e-5, 1.9));
    }
  }
  return s;
}

Suite gauge_charge_suite(uint64_t seed, double step) {
  Suite s;
  s.name = "gauge-charge";
  const int n = 3;
  ChartDomain dom{n, Model::HyperbolicPolar, 1.0};
  const auto pots = models::static_potentials(dom);
  const auto kills = models::killing_basis(dom);
  Rng rng(seed);
  for (int c = 0; c < 3; ++c) {
    const VectorField zeta = data::random_bump_vector(n, seed * 101 + c, 0.1, true);
    const Vec p = interior_point(&rng, n, 0.5, 2.5);
    FdOptions o1;
    o1.step = step;
    FdOptions o2;
    o2.step = 0.5 * step;
    const double r1 = constraints::verify_gauge_charge(
        dom, zeta, pots[c % n].field, kills[c % n].field, p, o1);
    const double r2 = constraints::verify_gauge_charge(
        dom, zeta, pots[c % n].field, kills[c % n].field, p, o2);
    s.rows.push_back(make_order_row("U_(L_zeta b,0)(V,W) = div_b Vt (bump)",
                                    point_str(p), r1, r2, 1e-5, 1.9));
  }
  // Killing control: zeta a rotation field of b, both sides vanish
  {
    VectorField rot;
    rot.eval = [n](const Vec& y) {
      Vec v = Vec::Zero(n);
      v(0) = -y(1);
      v(1) = y(0);
      return v;
    };
    rot.jac = [n](const Vec&) {
      Mat j = Mat::Zero(n, n);
      j(0, 1) = -1.0;
      j(1, 0) = 1.0;
      return j;
    };
    rot.hess = [n](const Vec&) { return Tensor3(n); };
    const Vec p = interior_point(&rng, n, 1.0, 2.0);
    FdOptions o1;
    o1.step = step;
    const double r1 = constraints::verify_gauge_charge(dom, rot, pots[0].field,
                                                       kills[0].field, p, o1);
    s.rows.push_back(
        make_row("U_(L_zeta b,0)(V,W) = div_b Vt (Killing zeta, both sides 0)",
                 point_str(p), r1, 1e-6));
  }
  return s;
}

Suite decomposition_suite(uint64_t seed, double) {
  Suite s;
  s.name = "decomposition";
  for (int n : {3, 4, 5}) {
    const cliff::CliffordRep rep = cliff::build_rep(n);
    Rng rng(seed + n);
    double worst = 0;
    for (int c = 0; c < 100; ++c) {
      Mat h(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) h(i, j) = h(j, i) = rng.uniform(-2.0, 2.0);
      worst = std::max(worst, cliff::verify_decomposition(rep, h));
    }
    s.rows.push_back(make_row(
        "nabla-bar_i + e_i.Dbar = nabla_i + e_i.D - pi_ij e0.e_j./2",
        "n=" + std::to_string(n) + ", 100 random h", worst, 1e-12));
  }
  return s;
}

Suite weitzenbock_suite(uint64_t seed, double step) {
  Suite s;
  s.name = "weitzenbock";
  const int n = 3;
  const cliff::CliffordRep rep = cliff::build_rep(n);
  // constant h = c delta, constant spinor: exact identity
  {
    SymTensorField h;
    const double c = 0.3;
    h.eval = [n, c](const Vec&) { return (c * Mat::Identity(n, n)).eval(); };
    h.deriv = [n](const Vec&) { return Tensor3(n); };
    cliff::SpinorField psi;
    VecC v0 = VecC::Zero(rep.N);
    v0(0) = 1.0;
    v0(1) = std::complex<double>(0.0, 0.5);
    psi.eval = [v0](const Vec&) { return v0; };
    psi.jac = [v0](const Vec&) { return MatC::Zero(v0.size(), 3).eval(); };
    Vec p(3);
    p << 0.7, -0.3, 1.1;
    const double r = cliff::verify_weitzenbock(rep, h, psi, p, step);
    s.rows.push_back(
        make_row("Dbar^2 = nabla*nabla + R (constant h = c delta)",
                 point_str(p), r, 1e-10));
  }
  // smooth bump h, quadratic spinor: order check
  {
    const SymTensorField h = data::random_bump_sym(n, seed * 7 + 5, 0.2);
    Rng rng(seed);
    MatC A = MatC::Zero(rep.N, n), B(rep.N, n);
    MatC C0 = MatC::Zero(rep.N, 1);
    std::vector<Mat> quad;  // quad[c](i,j) coefficients
    for (int c = 0; c < rep.N; ++c) {
      Mat Q(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) Q(i, j) = Q(j, i) = rng.uniform(-0.5, 0.5);
      quad.push_back(Q);
    }
    for (int c = 0; c < rep.N; ++c) {
      C0(c, 0) = std::complex<double>(rng.uniform(-1, 1), rng.uniform(-1, 1));
      for (int i = 0; i < n; ++i)
        A(c, i) = std::complex<double>(rng.uniform(-1, 1), rng.uniform(-1, 1));
    }
    B = A;
    cliff::SpinorField psi;
    psi.eval = [C0, A, quad, n](const Vec& x) {
      VecC v = C0.col(0);
      for (int c = 0; c < v.size(); ++c) {
        for (int i = 0; i < n; ++i) v(c) += A(c, i) * x(i);
        v(c) += x.dot(quad[c] * x);
      }
      return v;
    };
    psi.jac = [A, quad, n](const Vec& x) {
      MatC j = A;
      for (int c = 0; c < j.rows(); ++c) {
        const Vec g = 2.0 * (quad[c] * x);
        for (int i = 0; i < n; ++i) j(c, i) += g(i);
      }
      return j;
    };
    Vec p(3);
    p << 0.4, 0.9, 0.8;
    const double r1 = cliff::verify_weitzenbock(rep, h, psi, p, step);
    const double r2 = cliff::verify_weitzenbock(rep, h, psi, p, 0.5 * step);
    s.rows.push_back(make_order_row(
        "Dbar^2 = nabla*nabla + R (bump h, quadratic spinor)", point_str(p),
        r1, r2, 1e-4, 1.9));
  }
  return s;
}

Suite killing_dev_suite(uint64_t seed, double step) {
  Suite s;
  s.name = "killing-dev";
  const int n = 3;
  ChartDomain flat{n, Model::Flat, 1.0};
  FdOptions opt;
  opt.step = step;
  // flat, V = 1, W = 0, h = 0: development is Minkowski
  {
    const SymTensorField g = models::reference_metric(flat);
    const SymTensorField h = zero_sym_tensor_field();
    Vec p(3);
    p << 0.5, -0.2, 0.9;
    const auto rep = geom::killing_development_check(
        g, h, constant_scalar(1.0), zero_vector_field(), p, opt);
    const double worst =
        std::max({rep.res_gauss, rep.res_codazzi, rep.res_mixed});
    s.rows.push_back(make_row("curvature of the development (flat static)",
                              point_str(p), rep.refused ? 1.0 : worst, 1e-8));
  }
  // Schwarzschild slice, V = 1, W = 0, h = 0
  {
    data::DatasetDescriptor d = data::default_descriptor("schwarzschild");
    d.params["mass"] = 1.0;
    const auto ds = data::build_dataset(d);
    Vec p(3);
    p << 4.0, 1.0, 3.0;
    const auto rep = geom::killing_development_check(
        ds.g, ds.h, constant_scalar(1.0), zero_vector_field(), p, opt);
    const double worst =
        std::max({rep.res_gauss, rep.res_codazzi, rep.res_mixed});
    s.rows.push_back(make_row("curvature of the development (product slice)",
                              point_str(p), rep.refused ? 1.0 : worst, 1e-5));
  }
  // genuine nonzero shift: potential flow W = grad psi, h = Hess(psi)/V,
  // V = sqrt(1 + |grad psi|^2) solves the full generator system
  {
    const SymTensorField g = models::reference_metric(flat);
    const double a = 0.5;
    auto grad_psi = [a, n](const Vec& x) {
      Vec gp = Vec::Zero(n);
      gp(0) = a * std::cos(x(0)) * std::sin(x(1));
      gp(1) = a * std::sin(x(0)) * std::cos(x(1));
      return gp;
    };
    auto hess_psi = [a, n](const Vec& x) {
      Mat m = Mat::Zero(n, n);
      const double s1 = std::sin(x(0)), c1 = std::cos(x(0));
      const double s2 = std::sin(x(1)), c2 = std::cos(x(1));
      m(0, 0) = m(1, 1) = -a * s1 * s2;
      m(0, 1) = m(1, 0) = a * c1 * c2;
      return m;
    };
    auto third_psi = [a, n](const Vec& x) {
      Tensor3 t(n);
      const double s1 = std::sin(x(0)), c1 = std::cos(x(0));
      const double s2 = std::sin(x(1)), c2 = std::cos(x(1));
      t(0, 0, 0) = -a * c1 * s2;
      t(0, 0, 1) = t(0, 1, 0) = t(1, 0, 0) = -a * s1 * c2;
      t(0, 1, 1) = t(1, 0, 1) = t(1, 1, 0) = -a * c1 * s2;
      t(1, 1, 1) = -a * s1 * c2;
      return t;
    };
    ScalarField V;
    V.eval = [grad_psi](const Vec& x) {
      return std::sqrt(1.0 + grad_psi(x).squaredNorm());
    };
    V.grad = [grad_psi, hess_psi](const Vec& x) {
      const Vec w = grad_psi(x);
      return ((hess_psi(x) * w) / std::sqrt(1.0 + w.squaredNorm())).eval();
    };
    VectorField W;
    W.eval = grad_psi;
    W.jac = hess_psi;
    W.hess = third_psi;
    SymTensorField h;
    h.eval = [grad_psi, hess_psi](const Vec& x) {
      return (hess_psi(x) / std::sqrt(1.0 + grad_psi(x).squaredNorm())).eval();
    };
    h.deriv = [grad_psi, hess_psi, third_psi, n](const Vec& x) {
      const Vec w = grad_psi(x);
      const Mat hs = hess_psi(x);
      const double v = std::sqrt(1.0 + w.squaredNorm());
      const Vec dv = (hs * w) / v;
      const Tensor3 t3 = third_psi(x);
      Tensor3 out(n);
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            out(k, i, j) = t3(k, i, j) / v - hs(i, j) * dv(k) / (v * v);
      return out;
    };
    Vec p(3);
    p << 0.4, 0.7, 1.2;
    const auto rep = geom::killing_development_check(g, h, V, W, p, opt);
    const double worst =
        std::max({rep.res_gauss, rep.res_codazzi, rep.res_mixed});
    s.rows.push_back(make_row("curvature of the development (nonzero shift)",
                              point_str(p), rep.refused ? 1.0 : worst, 1e-5));
  }
  // refusal control: h = c delta with V = 1, W = 0 violates the generator
  // equations and must be refused
  {
    const SymTensorField g = models::reference_metric(flat);
    SymTensorField h;
    h.eval = [n](const Vec&) { return (0.5 * Mat::Identity(n, n)).eval(); };
    h.deriv = [n](const Vec&) { return Tensor3(n); };
    Vec p(3);
    p << 0.3, 0.1, 0.8;
    const auto rep = geom::killing_development_check(
        g, h, constant_scalar(1.0), zero_vector_field(), p, opt);
    s.rows.push_back(make_row("generator equations violated => refused",
                              point_str(p), rep.refused ? 0.0 : 1.0, 0.5));
  }
  (void)seed;
  return s;
}

Suite clifford_spectra_suite(uint64_t seed, double) {
  Suite s;
  s.name = "clifford-spectra";
  const int n = 3;
  const cliff::CliffordRep rep = cliff::build_rep(n);
  Rng rng(seed);
  double worstR = 0, worstU = 0, worstW = 0, worstT = 0, worstC = 0;
  for (int c = 0; c < 100; ++c) {
    const double rho = rng.uniform(-3, 3);
    Vec J(n);
    for (int i = 0; i < n; ++i) J(i) = rng.uniform(-2, 2);
    const auto R = cliff::operator_R(rep, rho, J);
    for (int i = 0; i < rep.N; ++i) {
      const double expected = 0.5 * (rho + (i < rep.N / 2 ? -J.norm() : J.norm()));
      worstR = std::max(worstR, std::abs(R.eigenvalues(i) - expected));
    }
    Vec pt(n - 1);
    for (int i = 0; i < n - 1; ++i) pt(i) = rng.uniform(-2, 2);
    const auto U = cliff::operator_U(rep, pt);
    for (int i = 0; i < rep.N; ++i) {
      const double expected = i < rep.N / 2 ? -pt.norm() : pt.norm();
      worstU = std::max(worstU, std::abs(U.eigenvalues(i) - expected));
    }
    const double rhoL = rng.uniform(-3, 3);
    const auto Wop = cliff::operator_W(rep, rhoL, J);
    for (int i = 0; i < rep.N; ++i) {
      const double expected =
          0.5 * (rhoL + (i < rep.N / 2 ? -J.norm() : J.norm()));
      worstW = std::max(worstW, std::abs(Wop.eigenvalues(i) - expected));
    }
    const auto T = cliff::operator_T(rep, pt);
    for (int i = 0; i < rep.N; ++i) {
      const double expected = i < rep.N / 2 ? -pt.norm() : pt.norm();
      worstT = std::max(worstT, std::abs(T.eigenvalues(i) - expected));
    }
    worstC = std::max(worstC, T.commutator_norm);
    worstT = std::max(worstT,
                      (T.matrix * T.top_mit_plus - pt.norm() * T.top_mit_plus)
                          .cwiseAbs()
                          .maxCoeff());
  }
  s.rows.push_back(make_row("spec R = (rho +/- |J|)/2", "100 random", worstR, 1e-12));
  s.rows.push_back(make_row("spec U = +/- |pi_tangential|", "100 random", worstU, 1e-12));
  s.rows.push_back(make_row("spec W = (rho_Lambda +/- |J|)/2", "100 random", worstW, 1e-12));
  s.rows.push_back(
      make_row("spec T = +/- |P|, top eigenvector in MIT eigenspace",
               "100 random", worstT, 1e-12));
  s.rows.push_back(make_row("[T, i gamma_n] = 0", "100 random", worstC, 1e-13));
  return s;
}

Suite shift_suite(uint64_t, double) {
  Suite s;
  s.name = "shift";
  for (int n : {3, 4, 5}) {
    const cliff::CliffordRep rep = cliff::build_rep(n);
    const double r1 = std::max(cliff::killing_dirac_shift_check(rep, +1),
                               cliff::killing_dirac_shift_check(rep, -1));
    s.rows.push_back(make_row("sum_i e_i.(+/- i/2 e_i.) = -(+/- n i/2)",
                              "n=" + std::to_string(n), r1, 1e-14));
    const double ctrl = cliff::killing_dirac_shift_control(rep);
    s.rows.push_back(make_row("wrong-sign control residual equals n",
                              "n=" + std::to_string(n),
                              std::abs(ctrl - n), 1e-13));
  }
  return s;
}

Suite invariance_suite(uint64_t, double) {
  Suite s;
  s.name = "invariance";
  mass::MassOptions opt;
  opt.order_polar = 24;
  opt.order_azimuth = 48;
  opt.radii = {12, 24, 48};
  // flat rotation on bowen-york
  {
    auto d = data::default_descriptor("bowen-york");
    const auto ds = data::build_dataset(d);
    const auto A = models::flat_rotation(ds.domain, 0, 1, M_PI / 6.0);
    const auto rep = mass::invariance_test(ds, A, opt);
    s.rows.push_back(make_row("flat rotation: E invariant", "bowen-york 30deg",
                              rep.E_dev, 1e-8));
    s.rows.push_back(make_row("flat rotation: P rotates", "bowen-york 30deg",
                              rep.P_dev, 1e-6));
  }
  // flat translation on schwarzschild
  {
    auto d = data::default_descriptor("schwarzschild");
    const auto ds = data::build_dataset(d);
    Vec t = Vec::Zero(3);
    t(0) = 0.5;
    const auto A = models::flat_translation(ds.domain, t);
    const auto rep = mass::invariance_test(ds, A, opt);
    const double tol = std::max(1e-6, 20.0 * rep.error_bars / rep.scale);
    s.rows.push_back(make_row("flat translation: (E,P) invariant",
                              "schwarzschild shift 0.5", rep.E_dev + rep.P_dev,
                              tol));
  }
  // hyperbolic boost and rotation on ads-schwarzschild
  {
    auto d = data::default_descriptor("ads-schwarzschild");
    const auto ds = data::build_dataset(d);
    const auto A = models::hyperbolic_boost(ds.domain, 0, 0.4);
    const auto rep = mass::invariance_test(ds, A, opt);
    s.rows.push_back(make_row("hyperbolic boost: <<E,E>> invariant",
                              "ads-schwarzschild boost 0.4", rep.lorentz_dev,
                              1e-6));
    s.rows.push_back(make_row("hyperbolic boost: E transforms by the basis action",
                              "ads-schwarzschild boost 0.4", rep.E_dev, 1e-5));
    const auto R = models::hyperbolic_rotation(ds.domain, 1, 2, 0.8);
    const auto rep2 = mass::invariance_test(ds, R, opt);
    s.rows.push_back(make_row("hyperbolic rotation: E transforms by the basis action",
                              "ads-schwarzschild rotation 0.8", rep2.E_dev, 1e-6));
  }
  return s;
}

}  // namespace

std::vector<std::string> suite_names() {
  return {"divergence",  "gauge-charge", "decomposition",
          "weitzenbock", "killing-dev",  "invariance",
          "clifford-spectra", "shift"};
}

Suite run_suite(const std::string& name, uint64_t seed, double step) {
  Suite s;
  if (name == "divergence")
    s = divergence_suite(seed, step);
  else if (name == "gauge-charge")
    s = gauge_charge_suite(seed, step);
  else if (name == "decomposition")
    s = decomposition_suite(seed, step);
  else if (name == "weitzenbock")
    s = weitzenbock_suite(seed, step);
  else if (name == "killing-dev")
    s = killing_dev_suite(seed, step);
  else if (name == "invariance")
    s = invariance_suite(seed, step);
  else if (name == "clifford-spectra")
    s = clifford_spectra_suite(seed, step);
  else if (name == "shift")
    s = shift_suite(seed, step);
  else
    throw InputError("unknown verification suite: " + name);
  s.pass = true;
  for (const auto& r : s.rows) s.pass = s.pass && r.pass;
  return s;
}

data::json to_json(const Suite& s) {
  data::json rows = data::json::array();
  for (const auto& r : s.rows) {
    data::json row;
    row["identity"] = r.identity;
    row["sample"] = r.sample;
    row["residual"] = r.residual;
    row["tolerance"] = r.tolerance;
    if (r.has_order) {
      row["observed_order"] = r.order;
      row["order_floor"] = r.order_floor;
    }
    row["pass"] = r.pass;
    rows.push_back(row);
  }
  return {{"suite", s.name}, {"rows", rows}, {"pass", s.pass}};
}

}  // namespace verify
}  // namespace decmass
