#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "decmass/constraints.hpp"
#include "decmass/datasets.hpp"

using namespace decmass;
using models::CausalClass;
using models::ChartDomain;
using models::Model;

namespace {

Vec point3(double a, double b, double c) {
  Vec p(3);
  p << a, b, c;
  return p;
}

std::vector<Vec> sample_points(const ChartDomain& dom, int count, uint64_t seed,
                               bool boundary) {
  Rng rng(seed);
  std::vector<Vec> pts;
  const double rmax = dom.model == Model::HyperbolicBall ? 0.4 : 3.0;
  while (static_cast<int>(pts.size()) < count) {
    Vec p(dom.n);
    for (int i = 0; i < dom.n; ++i) p(i) = rng.uniform(-rmax, rmax);
    p(dom.n - 1) = boundary ? 0.0 : std::abs(p(dom.n - 1)) + 0.05;
    if (dom.model == Model::HyperbolicBall && p.norm() > 0.65) continue;
    if (p.norm() < 0.1) continue;
    pts.push_back(p);
  }
  return pts;
}

// FD Lie-derivative oracle, independent of the analytic closures
Mat fd_lie_metric(const SymTensorField& g, const VectorField& W, const Vec& p) {
  const int n = static_cast<int>(p.size());
  FdOptions o;
  o.step = 1e-5 * std::max(1.0, p.norm());
  o.use_analytic = false;
  Mat lie(n, n);
  const Mat gm = g.eval(p);
  const Vec w = W.eval(p);
  Mat jw(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      auto comp = [&](const Vec& q) { return W.eval(q)(i); };
      jw(i, k) = fd_partial(comp, p, k, o);
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      auto comp = [&](const Vec& q) { return g.eval(q)(i, j); };
      double s = 0;
      for (int k = 0; k < n; ++k)
        s += w(k) * fd_partial(comp, p, k, o) + gm(k, j) * jw(k, i) +
             gm(i, k) * jw(k, j);
      lie(i, j) = s;
    }
  return lie;
}

double static_residual(const ChartDomain& dom, const ScalarField& V, const Vec& p) {
  const auto [F1, F2] =
      constraints::adjoint_constraint(dom, V, zero_vector_field(), p);
  (void)F2;
  return F1.cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("reference metrics") {
  ChartDomain flat{3, Model::Flat, 1.0};
  CHECK((models::reference_metric(flat).eval(point3(2, 1, 1)) -
         Mat::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-15);

  ChartDomain ball{3, Model::HyperbolicBall, 0.1};
  const Mat b0 = models::reference_metric(ball).eval(Vec::Zero(3));
  CHECK((b0 - 4.0 * Mat::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-14);

  for (Model m : {Model::HyperbolicPolar, Model::HyperbolicBall}) {
    ChartDomain dom{3, m, m == Model::HyperbolicBall ? 0.1 : 1.0};
    const auto b = models::reference_metric(dom);
    const Vec p = m == Model::HyperbolicBall ? point3(0.2, 0.1, 0.3)
                                             : point3(1.2, 0.4, 2.0);
    CHECK(geom::curvature(b, p).scalar == doctest::Approx(-6.0).epsilon(1e-9));
  }
}

TEST_CASE("reference metric analytic derivatives match finite differences") {
  for (Model m : {Model::Flat, Model::HyperbolicPolar, Model::HyperbolicBall}) {
    ChartDomain dom{3, m, m == Model::HyperbolicBall ? 0.1 : 1.0};
    const auto g = models::reference_metric(dom);
    const Vec p = m == Model::HyperbolicBall ? point3(0.25, -0.1, 0.2)
                                             : point3(1.1, -0.6, 0.8);
    FdOptions o;
    o.use_analytic = false;
    o.step = 1e-4;
    const Tensor3 d_an = g.deriv(p);
    const Tensor3 d_fd = deriv_of(g, p, o);
    const Tensor4 dd_an = g.deriv2(p);
    const Tensor4 dd_fd = deriv2_of(g, p, o);
    double e1 = 0, e2 = 0;
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          e1 = std::max(e1, std::abs(d_an(k, i, j) - d_fd(k, i, j)));
          for (int l = 0; l < 3; ++l)
            e2 = std::max(e2, std::abs(dd_an(k, l, i, j) - dd_fd(k, l, i, j)));
        }
    // FD truncation at step 1e-4 dominates; a wrong closure would miss by
    // orders of magnitude
    CHECK(e1 <= 1e-6);
    CHECK(e2 <= 1e-4);
  }
}

TEST_CASE("static potentials satisfy the static equation and boundary condition") {
  for (Model m : {Model::HyperbolicPolar, Model::HyperbolicBall}) {
    ChartDomain dom{3, m, m == Model::HyperbolicBall ? 0.1 : 1.0};
    const auto pots = models::static_potentials(dom);
    REQUIRE(pots.size() == 3);
    const auto interior = sample_points(dom, 50, 42, false);
    const auto boundary = sample_points(dom, 20, 43, true);
    const auto g0 = models::reference_metric(dom);
    for (const auto& pot : pots) {
      double worst = 0;
      for (const Vec& p : interior)
        worst = std::max(worst, static_residual(dom, pot.field, p));
      CHECK(worst <= 1e-6);
      double worst_b = 0;
      for (const Vec& p : boundary) {
        const auto bg = geom::boundary_geometry(g0, p);
        const Vec dv = grad_of(pot.field, p);
        const double dvn = dv.dot(bg.normal);
        const double vpi =
            pot.field.eval(p) * bg.second_fund.cwiseAbs().maxCoeff();
        worst_b = std::max(worst_b, std::abs(dvn) + vpi);
      }
      CHECK(worst_b <= 1e-8);
    }
  }
  ChartDomain flat{3, Model::Flat, 1.0};
  const auto pots = models::static_potentials(flat);
  REQUIRE(pots.size() == 1);
  CHECK(pots[0].field.eval(point3(5, 1, 2)) == doctest::Approx(1.0));
}

TEST_CASE("spec values for the half-ball potentials") {
  ChartDomain ball{3, Model::HyperbolicBall, 0.1};
  const auto pots = models::static_potentials(ball);
  CHECK(pots[0].field.eval(Vec::Zero(3)) == doctest::Approx(1.0));
  CHECK(pots[1].field.eval(Vec::Zero(3)) == doctest::Approx(0.0));
  CHECK(pots[2].field.eval(Vec::Zero(3)) == doctest::Approx(0.0));
}

TEST_CASE("killing basis elements are Killing and boundary-orthogonal") {
  for (Model m : {Model::HyperbolicPolar, Model::HyperbolicBall}) {
    ChartDomain dom{3, m, m == Model::HyperbolicBall ? 0.1 : 1.0};
    const auto g0 = models::reference_metric(dom);
    const auto basis = models::killing_basis(dom);
    REQUIRE(basis.size() == 3);
    const auto pts = sample_points(dom, 20, 7, false);
    const double lie_tol = m == Model::HyperbolicPolar ? 1e-7 : 1e-6;
    for (const auto& W : basis) {
      double worst = 0;
      for (const Vec& p : pts)
        worst = std::max(worst, fd_lie_metric(g0, W.field, p).cwiseAbs().maxCoeff());
      CHECK(worst <= lie_tol);
    }
    const auto pots = models::static_potentials(dom);
    const auto bpts = sample_points(dom, 10, 8, true);
    for (size_t a = 0; a < basis.size(); ++a) {
      for (const Vec& p : bpts) {
        const Mat gm = g0.eval(p);
        const Vec w = basis[a].field.eval(p);
        for (int A = 0; A < 2; ++A)
          CHECK(std::abs(w.dot(gm * Vec::Unit(3, A))) <= 1e-10);
        const auto bg = geom::boundary_geometry(g0, p);
        const Vec expected = pots[a].field.eval(p) * bg.normal;
        CHECK((w - expected).cwiseAbs().maxCoeff() <= 1e-9);
      }
    }
  }
  ChartDomain flat{3, Model::Flat, 1.0};
  const auto basis = models::killing_basis(flat);
  REQUIRE(basis.size() == 2);
  for (const auto& W : basis) {
    const Vec w1 = W.field.eval(point3(1, 2, 3));
    const Vec w2 = W.field.eval(point3(-4, 0, 1));
    CHECK((w1 - w2).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK(std::abs(w1(2)) <= 1e-15);
  }
}

TEST_CASE("half-ball Killing generator at the origin") {
  ChartDomain ball{3, Model::HyperbolicBall, 0.1};
  const auto basis = models::killing_basis(ball);
  const Vec w = basis[0].field.eval(Vec::Zero(3));
  CHECK(w(0) == doctest::Approx(0.0));
  CHECK(w(1) == doctest::Approx(0.0));
  CHECK(w(2) == doctest::Approx(0.5));
  const Mat b0 = models::reference_metric(ball).eval(Vec::Zero(3));
  CHECK(std::sqrt(w.dot(b0 * w)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("coordinate-model consistency of the potentials") {
  ChartDomain polar{3, Model::HyperbolicPolar, 1.0};
  ChartDomain ball{3, Model::HyperbolicBall, 0.1};
  const auto vp = models::static_potentials(polar);
  const auto vb = models::static_potentials(ball);
  Rng rng(20);
  for (int t = 0; t < 20; ++t) {
    Vec z(3);
    for (int i = 0; i < 3; ++i) z(i) = rng.uniform(-0.4, 0.4);
    z(2) = std::abs(z(2));
    const Vec y = models::ball_to_polar(z);
    CHECK((models::polar_to_ball(y) - z).cwiseAbs().maxCoeff() <= 1e-12);
    for (int a = 0; a < 3; ++a)
      CHECK(vb[a].field.eval(z) ==
            doctest::Approx(vp[a].field.eval(y)).epsilon(1e-9));
  }
}

TEST_CASE("isometries: identity, model invariance, boundary preservation") {
  auto d = data::default_descriptor("bowen-york");
  const auto ds = data::build_dataset(d);
  const auto id = models::identity_isometry(ds.domain);
  const auto same = models::isometry_apply(id, ds);
  const Vec p = point3(1.3, -0.4, 0.9);
  CHECK((same.h.eval(p) - ds.h.eval(p)).cwiseAbs().maxCoeff() == 0.0);

  ChartDomain flat{3, Model::Flat, 1.0};
  const auto rot = models::flat_rotation(flat, 0, 1, M_PI / 2.0);
  const auto delta = models::reference_metric(flat);
  const auto rotated = models::pullback_sym_tensor(delta, rot);
  CHECK((rotated.eval(p) - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-15);

  ChartDomain hyp{3, Model::HyperbolicPolar, 1.0};
  const auto b = models::reference_metric(hyp);
  for (const auto& iso : {models::hyperbolic_boost(hyp, 0, 0.7),
                          models::hyperbolic_rotation(hyp, 1, 2, 0.9)}) {
    const auto pulled = models::pullback_sym_tensor(b, iso);
    Vec y = point3(0.8, 1.4, 0.6);
    CHECK((pulled.eval(y) - b.eval(y)).cwiseAbs().maxCoeff() <= 1e-12);
  }

  CHECK_THROWS_AS(models::flat_rotation(flat, 0, 2, 0.3), InvalidIsometryError);
  CHECK_THROWS_AS(models::flat_translation(flat, point3(0, 0, 1.0)),
                  InvalidIsometryError);
  CHECK_THROWS_AS(models::hyperbolic_boost(hyp, 2, 0.3), InvalidIsometryError);

  models::Isometry bad = models::identity_isometry(flat);
  bad.apply = [](const Vec& x) {
    Vec q = x;
    q(2) += 0.5;
    return q;
  };
  CHECK_THROWS_AS(models::isometry_apply(bad, ds), InvalidIsometryError);
}

TEST_CASE("pullback derivative closures match finite differences") {
  ChartDomain hyp{3, Model::HyperbolicPolar, 1.0};
  auto d = data::default_descriptor("ads-schwarzschild");
  const auto ds = data::build_dataset(d);
  const auto iso = models::hyperbolic_boost(hyp, 0, 0.5);
  const auto pulled = models::pullback_sym_tensor(ds.g, iso);
  REQUIRE(pulled.has_deriv());
  REQUIRE(pulled.has_deriv2());
  const Vec p = point3(1.4, 0.8, 1.1);
  FdOptions o;
  o.use_analytic = false;
  o.step = 1e-4;
  const Tensor3 d_an = pulled.deriv(p);
  const Tensor3 d_fd = deriv_of(pulled, p, o);
  const Tensor4 dd_an = pulled.deriv2(p);
  const Tensor4 dd_fd = deriv2_of(pulled, p, o);
  double e1 = 0, e2 = 0;
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        e1 = std::max(e1, std::abs(d_an(k, i, j) - d_fd(k, i, j)));
        for (int l = 0; l < 3; ++l)
          e2 = std::max(e2, std::abs(dd_an(k, l, i, j) - dd_fd(k, l, i, j)));
      }
  CHECK(e1 <= 1e-7);
  CHECK(e2 <= 1e-4);
}

TEST_CASE("causal classification") {
  auto v3 = [](double a, double b, double c) {
    Vec v(3);
    v << a, b, c;
    return v;
  };
  CHECK(models::causal_classify(v3(1, 0, 0)) == CausalClass::TimelikeFuture);
  CHECK(models::causal_classify(v3(1, 1, 0)) == CausalClass::NullFuture);
  CHECK(models::causal_classify(v3(0, 0, 0)) == CausalClass::Zero);
  CHECK(models::causal_classify(v3(-2, 1, 0)) == CausalClass::TimelikePast);
  CHECK(models::causal_classify(v3(-1, -1, 0)) == CausalClass::NullPast);
  CHECK(models::causal_classify(v3(0.1, 1, 0)) == CausalClass::Spacelike);
  CHECK(models::causal_classify(v3(1.0, 1.0 + 1e-14, 0)) == CausalClass::NullFuture);

  const double al = 0.8;
  Mat boost = Mat::Identity(3, 3);
  boost(0, 0) = std::cosh(al);
  boost(1, 1) = std::cosh(al);
  boost(0, 1) = boost(1, 0) = std::sinh(al);
  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    Vec v(3);
    for (int i = 0; i < 3; ++i) v(i) = rng.uniform(-2, 2);
    const auto c1 = models::causal_classify(v, 0.0);
    const auto c2 = models::causal_classify((boost * v).eval(), 1e-12);
    if (c1 == CausalClass::TimelikeFuture || c1 == CausalClass::TimelikePast ||
        c1 == CausalClass::Spacelike)
      CHECK(c1 == c2);
  }
  CHECK(models::lorentz_inner(v3(2, 1, 1), v3(1, 1, 0)) == doctest::Approx(1.0));
}

TEST_CASE("dataset field invariants: symmetry and determinism") {
  for (const char* name :
       {"schwarzschild", "bowen-york", "ads-schwarzschild", "gauge-perturbation"}) {
    const auto ds = data::build_dataset(data::default_descriptor(name));
    Rng rng(99);
    for (int t = 0; t < 5; ++t) {
      Vec p(3);
      for (int i = 0; i < 3; ++i) p(i) = rng.uniform(0.8, 2.5);
      const Mat g1 = ds.g.eval(p);
      CHECK((g1 - g1.transpose()).cwiseAbs().maxCoeff() <= 1e-14);
      const Mat h1 = ds.h.eval(p);
      CHECK((h1 - h1.transpose()).cwiseAbs().maxCoeff() <= 1e-14);
      CHECK((ds.g.eval(p) - g1).cwiseAbs().maxCoeff() == 0.0);
      Eigen::LLT<Mat> llt(g1);
      CHECK(llt.info() == Eigen::Success);
    }
  }
}
