#include "decmass/geometry.hpp"

#include <cmath>

namespace decmass {
namespace geom {

Mat inverse_metric(const Mat& g) {
  Eigen::FullPivLU<Mat> lu(g);
  if (!lu.isInvertible())
    throw SingularMetricError("metric is singular at evaluation point");
  return lu.inverse();
}

Tensor3 christoffel(const Mat& g_inv, const Tensor3& dg) {
  const int n = static_cast<int>(g_inv.rows());
  Tensor3 G(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double s = 0;
        for (int l = 0; l < n; ++l)
          s += g_inv(k, l) * (dg(i, j, l) + dg(j, i, l) - dg(l, i, j));
        G(k, i, j) = G(k, j, i) = 0.5 * s;
      }
  return G;
}

Tensor3 covariant_deriv_sym(const Tensor3& dT, const Mat& T, const Tensor3& Gamma) {
  const int n = dT.dim();
  Tensor3 D(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) {
        double s = dT(i, j, k);
        for (int l = 0; l < n; ++l)
          s -= Gamma(l, i, j) * T(l, k) + Gamma(l, i, k) * T(j, l);
        D(i, j, k) = D(i, k, j) = s;
      }
  return D;
}

Mat covariant_deriv_covector(const Mat& dxi, const Vec& xi, const Tensor3& Gamma) {
  const int n = static_cast<int>(xi.size());
  Mat D(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = dxi(i, j);
      for (int l = 0; l < n; ++l) s -= Gamma(l, i, j) * xi(l);
      D(i, j) = s;
    }
  return D;
}

CurvatureBundle curvature(const SymTensorField& T, const Vec& p,
                          const FdOptions& opt) {
  const int n = static_cast<int>(p.size());
  CurvatureBundle out;
  out.g = T.eval(p);
  out.g = 0.5 * (out.g + out.g.transpose()).eval();
  out.g_inv = inverse_metric(out.g);
  const Tensor3 dg = deriv_of(T, p, opt);
  const Tensor4 ddg = deriv2_of(T, p, opt);
  out.christoffel = christoffel(out.g_inv, dg);

  // d_i g^{lm} = -g^{la} (d_i g_ab) g^{bm}
  Tensor3 dgi(n);
  for (int i = 0; i < n; ++i) {
    Mat dgm(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) dgm(a, b) = dg(i, a, b);
    Mat v = -out.g_inv * dgm * out.g_inv;
    for (int l = 0; l < n; ++l)
      for (int m = 0; m < n; ++m) dgi(i, l, m) = v(l, m);
  }

  // dGamma(i; l, j, k) = d_i Gamma^l_{jk}
  Tensor4 dGamma(n);
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l)
      for (int j = 0; j < n; ++j)
        for (int k = j; k < n; ++k) {
          double s = 0;
          for (int m = 0; m < n; ++m) {
            s += 0.5 * dgi(i, l, m) * (dg(j, k, m) + dg(k, j, m) - dg(m, j, k));
            s += 0.5 * out.g_inv(l, m) *
                 (ddg(i, j, k, m) + ddg(i, k, j, m) - ddg(i, m, j, k));
          }
          dGamma(i, l, j, k) = s;
          dGamma(i, l, k, j) = s;
        }

  // R^l_{kij}
  Tensor4 up(n);
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s = dGamma(i, l, j, k) - dGamma(j, l, i, k);
          for (int m = 0; m < n; ++m)
            s += out.christoffel(l, i, m) * out.christoffel(m, j, k) -
                 out.christoffel(l, j, m) * out.christoffel(m, i, k);
          up(l, k, i, j) = s;
        }

  out.riemann = Tensor4(n);
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s = 0;
          for (int m = 0; m < n; ++m) s += out.g(l, m) * up(m, k, i, j);
          out.riemann(l, k, i, j) = s;
        }

  out.ricci = Mat::Zero(n, n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) {
      double s = 0;
      for (int i = 0; i < n; ++i) s += up(i, k, i, j);
      out.ricci(k, j) = s;
    }
  out.scalar = 0;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) out.scalar += out.g_inv(k, j) * out.ricci(k, j);

  double sym = 0, bianchi = 0;
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const double r = out.riemann(l, k, i, j);
          sym = std::max(sym, std::abs(r + out.riemann(k, l, i, j)));
          sym = std::max(sym, std::abs(r + out.riemann(l, k, j, i)));
          sym = std::max(sym, std::abs(r - out.riemann(i, j, l, k)));
          bianchi = std::max(bianchi,
                             std::abs(r + out.riemann(l, i, j, k) +
                                      out.riemann(l, j, k, i)));
        }
  out.symmetry_residual = sym;
  out.bianchi_residual = bianchi;
  return out;
}

Mat orthonormal_frame(const Mat& g, const Vec* normal) {
  const int n = static_cast<int>(g.rows());
  Mat frame(n, n);
  std::vector<Vec> basis;
  if (normal) {
    Vec nu = *normal;
    nu /= std::sqrt(nu.dot(g * nu));
    basis.push_back(nu);
  }
  for (int i = 0; i < n && static_cast<int>(basis.size()) < n; ++i) {
    Vec v = Vec::Unit(n, i);
    for (const Vec& b : basis) v -= b.dot(g * v) * b;
    const double nrm2 = v.dot(g * v);
    if (nrm2 < 1e-24) continue;
    basis.push_back(v / std::sqrt(nrm2));
  }
  if (static_cast<int>(basis.size()) != n)
    throw SingularMetricError("failed to build orthonormal frame");
  if (normal) {
    // tangent vectors first, the normal goes last (e_n = rho)
    for (int i = 0; i < n - 1; ++i) frame.col(i) = basis[i + 1];
    frame.col(n - 1) = basis[0];
  } else {
    for (int i = 0; i < n; ++i) frame.col(i) = basis[i];
  }
  return frame;
}

BoundaryGeometry boundary_geometry(const SymTensorField& T, const Vec& p,
                                   const FdOptions& opt) {
  const int n = static_cast<int>(p.size());
  if (std::abs(p(n - 1)) > 1e-12)
    throw DomainError("boundary_geometry requires a point on {x_n = 0}");
  BoundaryGeometry out;
  Mat g = T.eval(p);
  g = 0.5 * (g + g.transpose()).eval();
  const Mat gi = inverse_metric(g);
  // rho^i = g^{in} / sqrt(g^{nn}): g-unit, g-orthogonal to the boundary
  // tangent plane, positive last component.
  Vec v = gi.col(n - 1);
  if (v(n - 1) <= 0) throw SingularMetricError("inward normal degenerate");
  out.normal = v / std::sqrt(v(n - 1));

  const Tensor3 dg = deriv_of(T, p, opt);
  const Tensor3 G = christoffel(gi, dg);
  out.induced = g.topLeftCorner(n - 1, n - 1);
  // b_AB = <nabla_A rho, d_B> = -Gamma^k_AB (g rho)_k
  const Vec rho_flat = g * out.normal;
  out.second_fund = Mat::Zero(n - 1, n - 1);
  for (int A = 0; A < n - 1; ++A)
    for (int B = 0; B < n - 1; ++B) {
      double s = 0;
      for (int k = 0; k < n; ++k) s -= G(k, A, B) * rho_flat(k);
      out.second_fund(A, B) = s;
    }
  const Mat gamma_inv = inverse_metric(out.induced);
  out.mean_curv = (gamma_inv * out.second_fund).trace();
  return out;
}

EinsteinNewton einstein_and_newton(const SymTensorField& T, const Vec& p,
                                   const FdOptions& opt, bool boundary_data) {
  EinsteinNewton out;
  const CurvatureBundle c = curvature(T, p, opt);
  out.einstein = c.ricci - 0.5 * c.scalar * c.g;
  if (boundary_data) {
    const BoundaryGeometry b = boundary_geometry(T, p, opt);
    out.newton = b.mean_curv * b.induced - b.second_fund;
  } else {
    out.newton = Mat(0, 0);
  }
  return out;
}

namespace {

// Assemble the development metric as an (n+1)-dim field over (u, x).
SymTensorField development_metric(const SymTensorField& g, const SymTensorField& h,
                                  const ScalarField& V, const VectorField& W) {
  (void)h;
  SymTensorField out;
  auto ge = g.eval;
  auto Ve = V.eval;
  auto We = W.eval;
  out.eval = [ge, Ve, We](const Vec& q) {
    const int n = static_cast<int>(q.size()) - 1;
    const Vec x = q.tail(n);
    const Mat gm = ge(x);
    const double v = Ve(x);
    const Vec w = We(x);
    const Vec wf = gm * w;
    Mat gt = Mat::Zero(n + 1, n + 1);
    gt(0, 0) = -v * v + w.dot(wf);
    for (int i = 0; i < n; ++i) gt(0, i + 1) = gt(i + 1, 0) = -wf(i);
    gt.bottomRightCorner(n, n) = gm;
    return gt;
  };
  if (g.has_deriv() && V.has_grad() && W.has_jac()) {
    auto gd = g.deriv;
    auto Vg = V.grad;
    auto Wj = W.jac;
    out.deriv = [ge, Ve, We, gd, Vg, Wj](const Vec& q) {
      const int n = static_cast<int>(q.size()) - 1;
      const Vec x = q.tail(n);
      const Mat gm = ge(x);
      const Tensor3 dg = gd(x);
      const double v = Ve(x);
      const Vec gv = Vg(x);
      const Vec w = We(x);
      const Mat jw = Wj(x);  // jw(i,j) = d_j W^i
      Tensor3 D(n + 1);      // D(k, a, b) = d_k gt_ab; d_u terms vanish
      for (int k = 0; k < n; ++k) {
        // d_k (W^a W^b g_ab)
        double dt = 0;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            dt += 2.0 * gm(a, b) * jw(a, k) * w(b) + w(a) * w(b) * dg(k, a, b);
        D(k + 1, 0, 0) = -2.0 * v * gv(k) + dt;
        for (int i = 0; i < n; ++i) {
          double s = 0;
          for (int j = 0; j < n; ++j)
            s += dg(k, i, j) * w(j) + gm(i, j) * jw(j, k);
          D(k + 1, 0, i + 1) = D(k + 1, i + 1, 0) = -s;
          for (int j = i; j < n; ++j) {
            D(k + 1, i + 1, j + 1) = dg(k, i, j);
            D(k + 1, j + 1, i + 1) = dg(k, i, j);
          }
        }
      }
      return D;
    };
  }
  return out;
}

}  // namespace

KillingDevReport killing_development_check(const SymTensorField& g,
                                           const SymTensorField& h,
                                           const ScalarField& V,
                                           const VectorField& W, const Vec& p,
                                           const FdOptions& opt,
                                           double precondition_tol) {
  const int n = static_cast<int>(p.size());
  KillingDevReport rep;
  const double v = V.eval(p);
  if (v <= 0) throw DegenerateLapseError("killing development needs V(p) > 0");

  // Precondition eq_VW: L_W g - 2 V h = 0 and d(V^2 - |W|^2) = 0.
  const Mat gm = g.eval(p);
  const Mat hm = h.eval(p);
  const Vec w = W.eval(p);
  const Mat jw = jac_of(W, p, opt);
  const Tensor3 dg = deriv_of(g, p, opt);
  Mat lie = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0;
      for (int k = 0; k < n; ++k)
        s += w(k) * dg(k, i, j) + gm(k, j) * jw(k, i) + gm(i, k) * jw(k, j);
      lie(i, j) = s;
    }
  rep.eq_vw_residual = (lie - 2.0 * v * hm).cwiseAbs().maxCoeff();
  auto vw2 = [&](const Vec& q) {
    const Vec wq = W.eval(q);
    const double vq = V.eval(q);
    return vq * vq - wq.dot(g.eval(q) * wq);
  };
  rep.eq_vw_diff_residual = fd_gradient(vw2, p, opt).cwiseAbs().maxCoeff();
  // antisymmetric part of nabla W_flat (curl of the lowered field)
  {
    const Mat gi = inverse_metric(gm);
    const Tensor3 G = christoffel(gi, dg);
    Mat dwf(n, n);  // d_i (g W)_j
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0;
        for (int a = 0; a < n; ++a)
          s += dg(i, j, a) * w(a) + gm(j, a) * jw(a, i);
        dwf(i, j) = s;
      }
    const Mat covw = covariant_deriv_covector(dwf, gm * w, G);
    rep.eq_vw_asym_residual = 0.5 * (covw - covw.transpose()).cwiseAbs().maxCoeff();
  }
  if (rep.eq_vw_residual > precondition_tol ||
      rep.eq_vw_diff_residual > precondition_tol ||
      rep.eq_vw_asym_residual > precondition_tol) {
    rep.refused = true;
    return rep;
  }

  // Curvature of the development metric at (u=0, p).
  const SymTensorField gt = development_metric(g, h, V, W);
  Vec q(n + 1);
  q(0) = 0.0;
  q.tail(n) = p;
  FdOptions opt_dev = opt;
  const CurvatureBundle cdev = curvature(gt, q, opt_dev);

  // Frames: {e_i} g-orthonormal at p, e0t = (1/V)(d_u + W).
  const Mat F = orthonormal_frame(gm);
  Mat E = Mat::Zero(n + 1, n + 1);
  E(0, 0) = 1.0 / v;
  for (int i = 0; i < n; ++i) E(i + 1, 0) = w(i) / v;
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i) E(a + 1, i + 1) = F(a, i);

  Tensor4 Rt(n + 1);
  for (int al = 0; al <= n; ++al)
    for (int be = 0; be <= n; ++be)
      for (int ga = 0; ga <= n; ++ga)
        for (int de = 0; de <= n; ++de) {
          double s = 0;
          for (int a = 0; a <= n; ++a)
            for (int b = 0; b <= n; ++b)
              for (int c = 0; c <= n; ++c)
                for (int d = 0; d <= n; ++d)
                  s += cdev.riemann(a, b, c, d) * E(a, al) * E(b, be) *
                       E(c, ga) * E(d, de);
          Rt(al, be, ga, de) = s;
        }

  // Slice data in the same spatial frame.
  const CurvatureBundle cg = curvature(g, p, opt);
  Tensor4 Rf(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int t = 0; t < n; ++t) {
          double s = 0;
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
              for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d)
                  s += cg.riemann(a, b, c, d) * F(a, i) * F(b, j) * F(c, k) *
                       F(d, t);
          Rf(i, j, k, t) = s;
        }
  const Mat hF = F.transpose() * hm * F;
  const Tensor3 dh = deriv_of(h, p, opt);
  const Tensor3 covh = covariant_deriv_sym(dh, hm, cg.christoffel);
  Tensor3 covhF(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double s = 0;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
              s += covh(a, b, c) * F(a, i) * F(b, j) * F(c, k);
        covhF(i, j, k) = s;
      }
  Vec wF(n);
  for (int i = 0; i < n; ++i) wF(i) = F.col(i).dot(gm * w);

  double rg = 0, rc = 0, rm = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        for (int t = 0; t < n; ++t) {
          const double rhs = Rf(i, j, k, t) + hF(i, k) * hF(j, t) -
                             hF(i, t) * hF(j, k);
          rg = std::max(rg, std::abs(Rt(i + 1, j + 1, k + 1, t + 1) - rhs));
        }
        const double codazzi = covhF(i, k, j) - covhF(j, k, i);
        rc = std::max(rc, std::abs(Rt(i + 1, j + 1, k + 1, 0) - codazzi));
      }
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      double rhs = 0;
      for (int t = 0; t < n; ++t)
        rhs += (covhF(k, i, t) - covhF(t, i, k)) * wF(t) / v;
      rm = std::max(rm, std::abs(Rt(i + 1, 0, k + 1, 0) - rhs));
    }
  rep.res_gauss = rg;
  rep.res_codazzi = rc;
  rep.res_mixed = rm;
  return rep;
}

}  // namespace geom
}  // namespace decmass
