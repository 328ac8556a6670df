#include "decmass/constraints.hpp"

#include <algorithm>
#include <cmath>

namespace decmass {
namespace constraints {

using geom::covariant_deriv_sym;

Mat conjugate_momentum(const Mat& g, const Mat& h) {
  const Mat gi = geom::inverse_metric(g);
  const double tr = (gi * h).trace();
  return h - tr * g;
}

ModelGeometry model_geometry(const ChartDomain& domain, const Vec& p) {
  ModelGeometry mg;
  const SymTensorField g0 = models::reference_metric(domain);
  mg.g0 = g0.eval(p);
  mg.g0_inv = geom::inverse_metric(mg.g0);
  mg.gamma = geom::christoffel(mg.g0_inv, g0.deriv(p));
  const int n = domain.n;
  mg.ricci = domain.hyperbolic() ? (-(n - 1) * mg.g0).eval()
                                 : Mat::Zero(n, n).eval();
  return mg;
}

namespace {

double tensor_inner(const Mat& gi, const Mat& A, const Mat& B) {
  return (gi * A * gi * B).trace();
}

double covector_norm(const Mat& gi, const Vec& xi) {
  return std::sqrt(std::max(0.0, xi.dot(gi * xi)));
}

// xi = div_g T - d tr_g T for a symmetric field T, using nabla of g.
Vec div_minus_dtr(const Mat& gi, const Tensor3& covT) {
  const int n = covT.dim();
  Vec xi(n);
  for (int j = 0; j < n; ++j) {
    double s = 0;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        s += gi(i, k) * (covT(i, k, j) - covT(j, i, k));
    xi(j) = s;
  }
  return xi;
}

}  // namespace

InteriorValues interior_constraints(const InitialDataSet& data, const Vec& p,
                                    const FdOptions& opt) {
  InteriorValues out;
  const geom::CurvatureBundle c = geom::curvature(data.g, p, opt);
  const Mat h = data.h.eval(p);
  const double trh = (c.g_inv * h).trace();
  const double h2 = tensor_inner(c.g_inv, h, h);
  out.rho = 0.5 * (c.scalar - 2.0 * data.lambda - h2 + trh * trh);
  const Tensor3 covh =
      covariant_deriv_sym(deriv_of(data.h, p, opt), h, c.christoffel);
  out.J = div_minus_dtr(c.g_inv, covh);
  out.J_norm = covector_norm(c.g_inv, out.J);
  return out;
}

BoundaryValues boundary_constraints(const InitialDataSet& data, const Vec& p,
                                    const FdOptions& opt) {
  const int n = data.domain.n;
  if (std::abs(p(n - 1)) > 1e-12)
    throw DomainError("boundary_constraints requires a boundary point");
  BoundaryValues out;
  const geom::BoundaryGeometry bg = geom::boundary_geometry(data.g, p, opt);
  out.H = bg.mean_curv;
  const Mat g = data.g.eval(p);
  const Mat h = data.h.eval(p);
  const Mat pi = conjugate_momentum(g, h);
  const Mat frame = geom::orthonormal_frame(g, &bg.normal);
  out.pi_tangential = Vec(n - 1);
  for (int A = 0; A < n - 1; ++A)
    out.pi_tangential(A) = bg.normal.dot(pi * frame.col(A));
  out.pi_normal = bg.normal.dot(pi * bg.normal);
  return out;
}

DecReport check_dec(const InitialDataSet& data, std::vector<Vec> interior_pts,
                    std::vector<Vec> boundary_pts, double tol,
                    const FdOptions& opt) {
  auto lex_less = [](const Vec& a, const Vec& b) {
    for (int i = 0; i < a.size(); ++i) {
      if (a(i) < b(i)) return true;
      if (a(i) > b(i)) return false;
    }
    return false;
  };
  std::sort(interior_pts.begin(), interior_pts.end(), lex_less);
  std::sort(boundary_pts.begin(), boundary_pts.end(), lex_less);

  DecReport rep;
  rep.tol = tol;
  rep.interior_samples = static_cast<int>(interior_pts.size());
  rep.boundary_samples = static_cast<int>(boundary_pts.size());
  bool first = true;
  for (const Vec& p : interior_pts) {
    const InteriorValues v = interior_constraints(data, p, opt);
    const double margin = v.rho - v.J_norm;
    if (first || margin < rep.interior_worst) {
      rep.interior_worst = margin;
      rep.interior_worst_point = p;
    }
    first = false;
  }
  first = true;
  for (const Vec& p : boundary_pts) {
    const BoundaryValues v = boundary_constraints(data, p, opt);
    const double mt = v.H - v.pi_tangential.norm();
    const double mn = v.H - std::abs(v.pi_normal);
    if (first || mt < rep.tangential_worst) {
      rep.tangential_worst = mt;
      rep.tangential_worst_point = p;
    }
    if (first || mn < rep.normal_worst) {
      rep.normal_worst = mn;
      rep.normal_worst_point = p;
    }
    first = false;
  }
  rep.interior_pass = rep.interior_worst >= -tol;
  rep.tangential_pass = rep.tangential_worst >= -tol;
  rep.normal_pass = rep.normal_worst >= -tol;
  return rep;
}

void box_samples(const ChartDomain& domain, const Vec& lo, const Vec& hi,
                 int per_axis, std::vector<Vec>* interior,
                 std::vector<Vec>* boundary) {
  if (per_axis < 2) throw InputError("box sampling needs >= 2 points per axis");
  const int n = domain.n;
  std::vector<Vec> pts;
  Vec p = lo;
  std::function<void(int)> rec = [&](int axis) {
    if (axis == n) {
      pts.push_back(p);
      return;
    }
    for (int k = 0; k < per_axis; ++k) {
      p(axis) = lo(axis) + (hi(axis) - lo(axis)) * k / (per_axis - 1.0);
      rec(axis + 1);
    }
  };
  rec(0);
  const bool ball = domain.model == models::Model::HyperbolicBall;
  for (const Vec& q : pts) {
    if (q(n - 1) < 0) continue;
    const double r = q.norm();
    if (!ball && r < domain.r0) continue;
    if (ball && r >= 0.999) continue;
    if (q(n - 1) == 0.0)
      boundary->push_back(q);
    else
      interior->push_back(q);
  }
}

LinearizedValues linearized_constraints(const ChartDomain& domain,
                                        const SymTensorField& f,
                                        const SymTensorField& h, const Vec& p,
                                        const FdOptions& opt) {
  const int n = domain.n;
  const ModelGeometry mg = model_geometry(domain, p);
  const SymTensorField g0f = models::reference_metric(domain);
  LinearizedValues out;

  // xi = div_0 f - d tr_0 f as a closure (for the outer divergence).
  auto xi_at = [&](const Vec& q) {
    const ModelGeometry m = model_geometry(domain, q);
    const Tensor3 covf = covariant_deriv_sym(deriv_of(f, q, opt), f.eval(q), m.gamma);
    return div_minus_dtr(m.g0_inv, covf);
  };
  const Vec xi = xi_at(p);

  // div_0 xi
  const double hstep = fd_step(p, opt);
  FdOptions dopt = opt;
  dopt.step = hstep;
  Mat dxi(n, n);  // dxi(i,j) = d_i xi_j
  for (int j = 0; j < n; ++j) {
    auto comp = [&](const Vec& q) { return xi_at(q)(j); };
    for (int i = 0; i < n; ++i) dxi(i, j) = fd_partial(comp, p, i, dopt);
  }
  const Mat covxi = geom::covariant_deriv_covector(dxi, xi, mg.gamma);
  double divxi = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) divxi += mg.g0_inv(i, j) * covxi(i, j);

  const Mat fm = f.eval(p);
  out.dpsi_scalar = divxi - tensor_inner(mg.g0_inv, mg.ricci, fm);

  const Mat hm = h.eval(p);
  const Tensor3 covh = covariant_deriv_sym(deriv_of(h, p, opt), hm, mg.gamma);
  out.dpsi_covector = 2.0 * div_minus_dtr(mg.g0_inv, covh);

  if (std::abs(p(n - 1)) <= 1e-12) {
    const geom::BoundaryGeometry bg = geom::boundary_geometry(g0f, p, opt);
    // div_{gamma0} of the tangential covector a_A(q') = f(rho0, d_A).
    auto a_at = [&](const Vec& qb, int A) {
      Vec q(n);
      q.head(n - 1) = qb;
      q(n - 1) = 0.0;
      const geom::BoundaryGeometry b2 = geom::boundary_geometry(g0f, q, opt);
      return (f.eval(q) * b2.normal)(A);
    };
    const Vec pb = p.head(n - 1);
    Mat da(n - 1, n - 1);  // da(A,B) = d_A a_B along the boundary
    for (int B = 0; B < n - 1; ++B) {
      auto comp = [&](const Vec& qb) { return a_at(qb, B); };
      FdOptions bopt = opt;
      bopt.halfspace = false;
      bopt.step = hstep;
      for (int A = 0; A < n - 1; ++A) da(A, B) = fd_partial(comp, pb, A, bopt);
    }
    // induced-metric Christoffels from g0 restricted to the boundary
    SymTensorField gamma0;
    auto g0e = g0f.eval;
    gamma0.eval = [g0e, n](const Vec& qb) {
      Vec q(n);
      q.head(n - 1) = qb;
      q(n - 1) = 0.0;
      return g0e(q).topLeftCorner(n - 1, n - 1).eval();
    };
    FdOptions bopt = opt;
    bopt.halfspace = false;
    const Mat gb = gamma0.eval(pb);
    const Mat gbi = geom::inverse_metric(gb);
    const Tensor3 Gb = geom::christoffel(gbi, deriv_of(gamma0, pb, bopt));
    Vec a(n - 1);
    for (int A = 0; A < n - 1; ++A) a(A) = a_at(pb, A);
    const Mat cova = geom::covariant_deriv_covector(da, a, Gb);
    double diva = 0;
    for (int A = 0; A < n - 1; ++A)
      for (int B = 0; B < n - 1; ++B) diva += gbi(A, B) * cova(A, B);
    // <Pi0, f>_gamma0 (Pi0 = 0 for both models, kept generic)
    double pif = 0;
    for (int A = 0; A < n - 1; ++A)
      for (int B = 0; B < n - 1; ++B)
        for (int C = 0; C < n - 1; ++C)
          for (int D = 0; D < n - 1; ++D)
            pif += gbi(A, C) * gbi(B, D) * bg.second_fund(A, B) * fm(C, D);
    out.dphi_scalar = xi.dot(bg.normal) + diva - pif;
    const Mat pi0 = hm - (mg.g0_inv * hm).trace() * mg.g0;
    out.dphi_covector = 2.0 * (pi0 * bg.normal);
  }
  return out;
}

Vec charge_density(const ChartDomain& domain, const SymTensorField& f,
                   const SymTensorField& h, const ScalarField& V,
                   const VectorField& W, const Vec& p, const FdOptions& opt) {
  const int n = domain.n;
  const ModelGeometry mg = model_geometry(domain, p);
  const Mat fm = f.eval(p);
  const Mat hm = h.eval(p);
  const Tensor3 covf = covariant_deriv_sym(deriv_of(f, p, opt), fm, mg.gamma);
  const Vec xi = div_minus_dtr(mg.g0_inv, covf);
  const double v = V.eval(p);
  const Vec dv = grad_of(V, p, opt);
  const Vec gradv = mg.g0_inv * dv;
  const double trf = (mg.g0_inv * fm).trace();
  const double trh = (mg.g0_inv * hm).trace();
  const Vec w = W.eval(p);
  Vec U = v * xi - fm * gradv + trf * dv;
  U += 2.0 * (hm * w - trh * (mg.g0 * w));
  (void)n;
  return U;
}

std::pair<Mat, Mat> adjoint_constraint(const ChartDomain& domain,
                                       const ScalarField& V,
                                       const VectorField& W, const Vec& p,
                                       const FdOptions& opt) {
  const int n = domain.n;
  const ModelGeometry mg = model_geometry(domain, p);
  const SymTensorField g0f = models::reference_metric(domain);
  const Vec dv = grad_of(V, p, opt);
  const Mat ddv = hess_of(V, p, opt);
  Mat hessV(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = ddv(i, j);
      for (int k = 0; k < n; ++k) s -= mg.gamma(k, i, j) * dv(k);
      hessV(i, j) = s;
    }
  const double lap = (mg.g0_inv * hessV).trace();
  const double v = V.eval(p);
  Mat F1 = hessV - lap * mg.g0 - v * mg.ricci;

  const Vec w = W.eval(p);
  const Mat jw = jac_of(W, p, opt);
  const Tensor3 dg0 = g0f.deriv(p);
  Mat lie(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0;
      for (int k = 0; k < n; ++k)
        s += w(k) * dg0(k, i, j) + mg.g0(k, j) * jw(k, i) +
             mg.g0(i, k) * jw(k, j);
      lie(i, j) = s;
    }
  double divw = jw.trace();
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) divw += mg.gamma(i, i, k) * w(k);
  Mat F2 = -lie + 2.0 * divw * mg.g0;
  return {F1, F2};
}

double verify_divergence_identity(const ChartDomain& domain,
                                  const SymTensorField& f,
                                  const SymTensorField& h,
                                  const ScalarField& V, const VectorField& W,
                                  const Vec& p, const FdOptions& opt) {
  const int n = domain.n;
  const ModelGeometry mg = model_geometry(domain, p);
  const LinearizedValues lin = linearized_constraints(domain, f, h, p, opt);
  const double v = V.eval(p);
  const Vec w = W.eval(p);
  const double lhs = v * lin.dpsi_scalar + lin.dpsi_covector.dot(w);

  // div_0 U by FD of the charge-density closure
  auto U_at = [&](const Vec& q) { return charge_density(domain, f, h, V, W, q, opt); };
  const Vec U = U_at(p);
  Mat dU(n, n);
  FdOptions dopt = opt;
  dopt.step = fd_step(p, opt);
  for (int j = 0; j < n; ++j) {
    auto comp = [&](const Vec& q) { return U_at(q)(j); };
    for (int i = 0; i < n; ++i) dU(i, j) = fd_partial(comp, p, i, dopt);
  }
  const Mat covU = geom::covariant_deriv_covector(dU, U, mg.gamma);
  double divU = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) divU += mg.g0_inv(i, j) * covU(i, j);

  const auto [F1, F2] = adjoint_constraint(domain, V, W, p, opt);
  const double pairing = tensor_inner(mg.g0_inv, f.eval(p), F1) +
                         tensor_inner(mg.g0_inv, h.eval(p), F2);
  return std::abs(lhs - divU - pairing);
}

SymTensorField lie_derivative_metric(const ChartDomain& domain,
                                     const VectorField& zeta) {
  const SymTensorField g0 = models::reference_metric(domain);
  SymTensorField out;
  auto ge = g0.eval;
  auto gd = g0.deriv;
  auto gd2 = g0.deriv2;
  auto ze = zeta.eval;
  auto zj = zeta.jac;
  auto zh = zeta.hess;
  const int n = domain.n;
  auto jac_or_fd = [zj, ze](const Vec& q) {
    if (zj) return zj(q);
    VectorField tmp{ze, nullptr, nullptr};
    return jac_of(tmp, q);
  };
  out.eval = [ge, gd, ze, jac_or_fd, n](const Vec& q) {
    const Mat g = ge(q);
    const Tensor3 dg = gd(q);
    const Vec z = ze(q);
    const Mat jz = jac_or_fd(q);
    Mat lie(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0;
        for (int k = 0; k < n; ++k)
          s += z(k) * dg(k, i, j) + g(k, j) * jz(k, i) + g(i, k) * jz(k, j);
        lie(i, j) = s;
      }
    return lie;
  };
  if (zeta.has_jac() && zeta.has_hess()) {
    out.deriv = [ge, gd, gd2, ze, zj, zh, n](const Vec& q) {
      const Mat g = ge(q);
      const Tensor3 dg = gd(q);
      const Tensor4 ddg = gd2(q);
      const Vec z = ze(q);
      const Mat jz = zj(q);
      const Tensor3 hz = zh(q);  // hz(a,i,j) = d_i d_j zeta^a
      Tensor3 out3(n);
      for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            double s = 0;
            for (int k = 0; k < n; ++k) {
              s += jz(k, l) * dg(k, i, j) + z(k) * ddg(l, k, i, j);
              s += dg(l, k, j) * jz(k, i) + g(k, j) * hz(k, l, i);
              s += dg(l, i, k) * jz(k, j) + g(i, k) * hz(k, l, j);
            }
            out3(l, i, j) = s;
          }
      return out3;
    };
  }
  return out;
}

double verify_gauge_charge(const ChartDomain& domain, const VectorField& zeta,
                           const ScalarField& V, const VectorField& W,
                           const Vec& p, const FdOptions& opt) {
  const int n = domain.n;
  if (!domain.hyperbolic())
    throw InvalidGaugeError("gauge-charge identity is a hyperbolic-model check");
  // zeta must be tangent to the boundary
  {
    Rng rng(0xfeedface42ull);
    for (int k = 0; k < 8; ++k) {
      Vec q = Vec::Zero(n);
      for (int i = 0; i < n - 1; ++i) q(i) = rng.uniform(-2.0, 2.0);
      if (domain.model == models::Model::HyperbolicBall) q *= 0.3 / std::max(q.norm(), 1.0);
      if (std::abs(zeta.eval(q)(n - 1)) > 1e-10)
        throw InvalidGaugeError("zeta is not tangent to the boundary");
    }
  }
  const ModelGeometry mg = model_geometry(domain, p);
  const SymTensorField f = lie_derivative_metric(domain, zeta);
  const SymTensorField h0 = zero_sym_tensor_field();
  const Vec lhs = charge_density(domain, f, h0, V, W, p, opt);

  // Vt_ik = V (zeta_i;k - zeta_k;i) + 2 (zeta_k V_i - zeta_i V_k) with the
  // derivative-index-first convention zeta_i;k = nabla_k zeta_i read as
  // d_i (g0 zeta)_k; the antisymmetrized covariant derivative reduces to the
  // curl of the lowered field.
  auto Vt_at = [&](const Vec& q) {
    const ModelGeometry m = model_geometry(domain, q);
    const SymTensorField g0f = models::reference_metric(domain);
    const Vec z = zeta.eval(q);
    const Mat jz = jac_of(zeta, q, opt);
    const Tensor3 dg0 = g0f.deriv(q);
    // d_k (g0 zeta)_i
    Mat dzf(n, n);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i) {
        double s = 0;
        for (int a = 0; a < n; ++a)
          s += dg0(k, i, a) * z(a) + m.g0(i, a) * jz(a, k);
        dzf(k, i) = s;
      }
    const double v = V.eval(q);
    const Vec dv = grad_of(V, q, opt);
    const Vec zf = m.g0 * z;
    Mat Vt(n, n);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        Vt(i, k) = v * (dzf(i, k) - dzf(k, i)) + 2.0 * (zf(i) * dv(k) - zf(k) * dv(i));
    return Vt;
  };
  const Mat Vt = Vt_at(p);
  // (div_b Vt)_k = g0^{ij} nabla_i Vt_{jk}
  Tensor3 dVt(n);
  FdOptions dopt = opt;
  dopt.step = fd_step(p, opt);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      auto comp = [&](const Vec& q) { return Vt_at(q)(a, b); };
      for (int i = 0; i < n; ++i) dVt(i, a, b) = fd_partial(comp, p, i, dopt);
    }
  Vec rhs(n);
  for (int k = 0; k < n; ++k) {
    double s = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double nab = dVt(i, j, k);
        for (int l = 0; l < n; ++l)
          nab -= mg.gamma(l, i, j) * Vt(l, k) + mg.gamma(l, i, k) * Vt(j, l);
        s += mg.g0_inv(i, j) * nab;
      }
    rhs(k) = s;
  }
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

double hamiltonian_density(const InitialDataSet& data, const ScalarField& V,
                           const VectorField& W, const Vec& p, bool boundary,
                           const FdOptions& opt) {
  const double v = V.eval(p);
  const Vec w = W.eval(p);
  const int n = data.domain.n;
  if (!boundary) {
    const InteriorValues iv = interior_constraints(data, p, opt);
    return v * iv.rho + iv.J.dot(w);
  }
  const geom::BoundaryGeometry bg = geom::boundary_geometry(data.g, p, opt);
  const Mat pi = conjugate_momentum(data.g.eval(p), data.h.eval(p));
  const Vec rho_pi = pi * bg.normal;  // (rho .| pi)_i, coordinate components
  (void)n;
  return v * bg.mean_curv + rho_pi.dot(w);
}

namespace {

// deterministic direction samples on the coordinate unit hemisphere
std::vector<Vec> hemisphere_dirs(int n, int count, uint64_t seed) {
  Rng rng(seed);
  std::vector<Vec> dirs;
  dirs.reserve(count);
  while (static_cast<int>(dirs.size()) < count) {
    Vec v(n);
    for (int i = 0; i < n; ++i) {
      const double u1 = rng.uniform();
      const double u2 = rng.uniform();
      v(i) = std::sqrt(-2.0 * std::log(u1 + 1e-300)) * std::cos(2.0 * M_PI * u2);
    }
    if (v.norm() < 1e-8) continue;
    v(n - 1) = std::abs(v(n - 1));
    dirs.push_back(v / v.norm());
  }
  return dirs;
}

}  // namespace

DecayAudit decay_audit(const InitialDataSet& data,
                       const std::vector<double>& radii, const FdOptions& opt) {
  const int n = data.domain.n;
  const bool hyp = data.domain.hyperbolic();
  const double tau = data.decay_exponent;
  const SymTensorField g0f = models::reference_metric(data.domain);
  SymTensorField neg_g0;
  neg_g0.eval = [g0f](const Vec& q) { return (-g0f.eval(q)).eval(); };
  neg_g0.deriv = [g0f](const Vec& q) {
    Tensor3 d = g0f.deriv(q);
    const int nn = d.dim();
    Tensor3 o(nn);
    for (int a = 0; a < nn; ++a)
      for (int i = 0; i < nn; ++i)
        for (int j = 0; j < nn; ++j) o(a, i, j) = -d(a, i, j);
    return o;
  };
  neg_g0.deriv2 = [g0f](const Vec& q) {
    Tensor4 d = g0f.deriv2(q);
    const int nn = d.dim();
    Tensor4 o(nn);
    for (int a = 0; a < nn; ++a)
      for (int b = 0; b < nn; ++b)
        for (int i = 0; i < nn; ++i)
          for (int j = 0; j < nn; ++j) o(a, b, i, j) = -d(a, b, i, j);
    return o;
  };
  const SymTensorField f = add_fields(data.g, neg_g0);
  DecayAudit audit;
  const int dirs_count = 64;
  const auto dirs = hemisphere_dirs(n, dirs_count, 0xdecau);
  double prev_shell = 0, prev_ring = 0;
  for (size_t k = 0; k < radii.size(); ++k) {
    const double r = radii[k];
    if (r < data.domain.r0)
      throw InputError("decay audit radii must lie in the asymptotic region");
    DecayAuditRow row;
    row.r = r;
    // weights: flat f ~ r^-tau with euclidean norms; hyperbolic f ~ |y|^-kappa
    // with b-norms
    const double wf = hyp ? std::pow(r, tau) : std::pow(r, tau);
    const double wh = hyp ? std::pow(r, tau) : std::pow(r, tau + 1.0);
    for (const Vec& d : dirs) {
      const Vec p = r * d;
      const Mat g0 = g0f.eval(p);
      const Mat gi = geom::inverse_metric(g0);
      const Mat fm = f.eval(p);
      const Mat hm = data.h.eval(p);
      const Tensor3 df = deriv_of(f, p, opt);
      const Tensor3 dh = deriv_of(data.h, p, opt);
      double nf = 0, ndf = 0, nddf = 0, nh = 0, ndh = 0;
      if (!hyp) {
        nf = fm.norm();
        nh = hm.norm();
        double s = 0, sh = 0;
        for (int a = 0; a < n; ++a)
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
              s += df(a, i, j) * df(a, i, j);
              sh += dh(a, i, j) * dh(a, i, j);
            }
        ndf = std::sqrt(s);
        ndh = std::sqrt(sh);
        const Tensor4 ddf = deriv2_of(f, p, opt);
        double s2 = 0;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            for (int i = 0; i < n; ++i)
              for (int j = 0; j < n; ++j) s2 += ddf(a, b, i, j) * ddf(a, b, i, j);
        nddf = std::sqrt(s2);
        row.f0 = std::max(row.f0, nf * wf);
        row.f1 = std::max(row.f1, r * ndf * wf);
        row.f2 = std::max(row.f2, r * r * nddf * wf);
        row.h0 = std::max(row.h0, nh * wh);
        row.h1 = std::max(row.h1, r * ndh * wh);
      } else {
        // b-norms; covariant derivatives w.r.t. b
        const ModelGeometry mg = model_geometry(data.domain, p);
        auto bnorm2 = [&](const Mat& T) {
          return (gi * T * gi * T).trace();
        };
        nf = std::sqrt(std::max(0.0, bnorm2(fm)));
        nh = std::sqrt(std::max(0.0, bnorm2(hm)));
        const Tensor3 cf = covariant_deriv_sym(df, fm, mg.gamma);
        const Tensor3 ch = covariant_deriv_sym(dh, hm, mg.gamma);
        double s = 0, sh = 0;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            for (int i = 0; i < n; ++i)
              for (int j = 0; j < n; ++j)
                for (int c = 0; c < n; ++c)
                  for (int d2 = 0; d2 < n; ++d2) {
                    const double w3 = gi(a, b) * gi(i, c) * gi(j, d2);
                    s += w3 * cf(a, i, j) * cf(b, c, d2);
                    sh += w3 * ch(a, i, j) * ch(b, c, d2);
                  }
        ndf = std::sqrt(std::max(0.0, s));
        ndh = std::sqrt(std::max(0.0, sh));
        row.f0 = std::max(row.f0, nf * wf);
        row.f1 = std::max(row.f1, ndf * wf);
        row.h0 = std::max(row.h0, nh * wf);
        row.h1 = std::max(row.h1, ndh * wf);
        // |nabla^2_b f|_b: outer covariant derivative of (nabla f) with raw
        // partials taken by FD over the covariant-derivative closure
        auto covf_at = [&](const Vec& q) {
          const ModelGeometry m2 = model_geometry(data.domain, q);
          return covariant_deriv_sym(deriv_of(f, q, opt), f.eval(q), m2.gamma);
        };
        Tensor4 ddcf(n);
        for (int b = 0; b < n; ++b)
          for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
              auto comp = [&](const Vec& q) { return covf_at(q)(b, i, j); };
              for (int a = 0; a < n; ++a) {
                const double v = fd_partial(comp, p, a, opt);
                ddcf(a, b, i, j) = v;
                ddcf(a, b, j, i) = v;
              }
            }
        Tensor4 c2(n);
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            for (int i = 0; i < n; ++i)
              for (int j = 0; j < n; ++j) {
                double v = ddcf(a, b, i, j);
                for (int c = 0; c < n; ++c)
                  v -= mg.gamma(c, a, b) * cf(c, i, j) +
                       mg.gamma(c, a, i) * cf(b, c, j) +
                       mg.gamma(c, a, j) * cf(b, i, c);
                c2(a, b, i, j) = v;
              }
        double s2 = 0;
        for (int a = 0; a < n; ++a)
          for (int a2 = 0; a2 < n; ++a2)
            for (int b = 0; b < n; ++b)
              for (int b2 = 0; b2 < n; ++b2)
                for (int i = 0; i < n; ++i)
                  for (int i2 = 0; i2 < n; ++i2)
                    for (int j = 0; j < n; ++j)
                      for (int j2 = 0; j2 < n; ++j2)
                        s2 += gi(a, a2) * gi(b, b2) * gi(i, i2) * gi(j, j2) *
                              c2(a, b, i, j) * c2(a2, b2, i2, j2);
        row.f2 = std::max(row.f2, std::sqrt(std::max(0.0, s2)) * wf);
      }
      // shell integrands at the largest radius band
    }
    // shell integrals of |Psi| over [r, r*1.25] and |Phi| over the ring
    const int shell_radii = 3, shell_dirs = 32;
    const auto sdirs = hemisphere_dirs(n, shell_dirs, 0xdecaf + k);
    double shell = 0, shell_volume = 0;
    const double r1 = r, r2 = 1.25 * r;
    for (int a = 0; a < shell_radii; ++a) {
      const double rr = r1 + (r2 - r1) * (a + 0.5) / shell_radii;
      double mean = 0;
      for (const Vec& d : sdirs) {
        const Vec p = rr * d;
        const InteriorValues iv = interior_constraints(data, p, opt);
        double w = hyp ? rr : 1.0;  // weight |y| in the hyperbolic case
        mean += w * 2.0 * std::sqrt(iv.rho * iv.rho + iv.J_norm * iv.J_norm);
      }
      mean /= shell_dirs;
      // hemisphere area ~ (omega_{n-1}/2) rr^{n-1} in chart coordinates
      shell += mean * std::pow(rr, n - 1) * (r2 - r1) / shell_radii;
      shell_volume += (hyp ? rr : 1.0) * std::pow(rr, n - 1) * (r2 - r1) /
                      shell_radii;
    }
    row.shell_interior = shell;
    double ring = 0;
    {
      Rng rng(0xb0a7 + k);
      const int ring_dirs = 24;
      double mean = 0;
      for (int a = 0; a < ring_dirs; ++a) {
        Vec p = Vec::Zero(n);
        // random direction in the boundary plane
        double norm2 = 0;
        for (int i = 0; i < n - 1; ++i) {
          const double u1 = rng.uniform(), u2 = rng.uniform();
          p(i) = std::sqrt(-2.0 * std::log(u1 + 1e-300)) *
                 std::cos(2.0 * M_PI * u2);
          norm2 += p(i) * p(i);
        }
        p *= r / std::sqrt(std::max(norm2, 1e-300));
        const BoundaryValues bv = boundary_constraints(data, p, opt);
        const double phi_norm =
            2.0 * std::sqrt(bv.H * bv.H + bv.pi_tangential.squaredNorm() +
                            (hyp ? bv.pi_normal * bv.pi_normal : 0.0));
        mean += (hyp ? r : 1.0) * phi_norm;
      }
      ring = mean / ring_dirs * std::pow(r, n - 2);
    }
    row.shell_boundary = ring;
    if (k > 0) {
      const DecayAuditRow& prev = audit.rows.back();
      const double slack = 1.10;
      if (row.f0 > slack * prev.f0 + 1e-12 || row.f1 > slack * prev.f1 + 1e-12 ||
          row.f2 > slack * prev.f2 + 1e-12 || row.h0 > slack * prev.h0 + 1e-12 ||
          row.h1 > slack * prev.h1 + 1e-12)
        audit.sup_pass = false;
      // near-vacuum constraints are cancellation/truncation noise; hold the
      // integral trend check to integrands resolved above an per-volume
      // floor (tighter when analytic second derivatives are available)
      const double res = data.g.has_deriv2() ? 1e-8 : 1e-6;
      const double floor_in = res * shell_volume + 1e-12;
      const double floor_bd =
          res * (hyp ? r : 1.0) * std::pow(r, n - 2) + 1e-12;
      const bool in_resolved =
          row.shell_interior > floor_in || prev_shell > floor_in;
      const bool bd_resolved =
          row.shell_boundary > floor_bd || prev_ring > floor_bd;
      if ((in_resolved && row.shell_interior > slack * prev_shell + 1e-12) ||
          (bd_resolved && row.shell_boundary > slack * prev_ring + 1e-12))
        audit.integral_pass = false;
    }
    prev_shell = row.shell_interior;
    prev_ring = row.shell_boundary;
    audit.rows.push_back(row);
  }
  return audit;
}

}  // namespace constraints
}  // namespace decmass
