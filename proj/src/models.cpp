#include "decmass/models.hpp"

#include <cmath>

namespace decmass {
namespace models {

std::string model_name(Model m) {
  switch (m) {
    case Model::Flat: return "flat";
    case Model::HyperbolicPolar: return "hyperbolic-polar";
    case Model::HyperbolicBall: return "hyperbolic-ball";
  }
  return "?";
}

Model model_from_name(const std::string& s) {
  if (s == "flat") return Model::Flat;
  if (s == "hyperbolic-polar") return Model::HyperbolicPolar;
  if (s == "hyperbolic-ball") return Model::HyperbolicBall;
  throw InputError("unknown model: " + s);
}

SymTensorField reference_metric(const ChartDomain& domain) {
  domain.validate();
  const int n = domain.n;
  switch (domain.model) {
    case Model::Flat: {
      SymTensorField f;
      f.eval = [n](const Vec&) { return Mat::Identity(n, n).eval(); };
      f.deriv = [n](const Vec&) { return Tensor3(n); };
      f.deriv2 = [n](const Vec&) { return Tensor4(n); };
      return f;
    }
    case Model::HyperbolicPolar: {
      // b_ij = delta_ij - y_i y_j / (1 + |y|^2)
      SymTensorField f;
      f.eval = [n](const Vec& y) {
        const double s = 1.0 + y.squaredNorm();
        Mat b = Mat::Identity(n, n) - (y * y.transpose()) / s;
        return b;
      };
      f.deriv = [n](const Vec& y) {
        const double s = 1.0 + y.squaredNorm();
        Tensor3 d(n);
        for (int k = 0; k < n; ++k)
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
              double v = -((k == i ? y(j) : 0.0) + (k == j ? y(i) : 0.0)) / s +
                         2.0 * y(i) * y(j) * y(k) / (s * s);
              d(k, i, j) = v;
            }
        return d;
      };
      f.deriv2 = [n](const Vec& y) {
        const double s = 1.0 + y.squaredNorm();
        const double s2 = s * s, s3 = s2 * s;
        Tensor4 d(n);
        auto kd = [](int a, int b) { return a == b ? 1.0 : 0.0; };
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            for (int i = 0; i < n; ++i)
              for (int j = 0; j < n; ++j) {
                double v = -(kd(k, i) * kd(l, j) + kd(k, j) * kd(l, i)) / s +
                           2.0 * (kd(k, i) * y(j) + kd(k, j) * y(i)) * y(l) / s2 +
                           2.0 * (kd(l, i) * y(j) + kd(l, j) * y(i)) * y(k) / s2 +
                           2.0 * y(i) * y(j) * kd(k, l) / s2 -
                           8.0 * y(i) * y(j) * y(k) * y(l) / s3;
                d(k, l, i, j) = v;
              }
        return d;
      };
      return f;
    }
    case Model::HyperbolicBall: {
      // b = 4 / (1 - |z|^2)^2 delta
      SymTensorField f;
      auto phi = [](const Vec& z) {
        const double sm = 1.0 - z.squaredNorm();
        return 4.0 / (sm * sm);
      };
      f.eval = [n, phi](const Vec& z) {
        return (phi(z) * Mat::Identity(n, n)).eval();
      };
      f.deriv = [n, phi](const Vec& z) {
        const double sm = 1.0 - z.squaredNorm();
        Tensor3 d(n);
        for (int k = 0; k < n; ++k) {
          const double dphi = 16.0 * z(k) / (sm * sm * sm);
          for (int i = 0; i < n; ++i) d(k, i, i) = dphi;
        }
        return d;
      };
      f.deriv2 = [n](const Vec& z) {
        const double sm = 1.0 - z.squaredNorm();
        const double sm3 = sm * sm * sm, sm4 = sm3 * sm;
        Tensor4 d(n);
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            const double v = (k == l ? 16.0 / sm3 : 0.0) +
                             96.0 * z(k) * z(l) / sm4;
            for (int i = 0; i < n; ++i) d(k, l, i, i) = v;
          }
        return d;
      };
      return f;
    }
  }
  throw InputError("unreachable");
}

std::vector<StaticPotential> static_potentials(const ChartDomain& domain) {
  domain.validate();
  const int n = domain.n;
  std::vector<StaticPotential> out;
  switch (domain.model) {
    case Model::Flat:
      out.push_back({0, constant_scalar(1.0)});
      return out;
    case Model::HyperbolicPolar: {
      // V_(0) = sqrt(1+|y|^2), V_(A) = y_A  (hyperboloid coordinates x_a)
      ScalarField v0;
      v0.eval = [](const Vec& y) { return std::sqrt(1.0 + y.squaredNorm()); };
      v0.grad = [](const Vec& y) {
        const double x0 = std::sqrt(1.0 + y.squaredNorm());
        return (y / x0).eval();
      };
      v0.hess = [n](const Vec& y) {
        const double x0 = std::sqrt(1.0 + y.squaredNorm());
        Mat h = Mat::Identity(n, n) / x0 -
                (y * y.transpose()) / (x0 * x0 * x0);
        return h;
      };
      out.push_back({0, v0});
      for (int a = 1; a < n; ++a) {
        ScalarField va;
        const int idx = a - 1;
        va.eval = [idx](const Vec& y) { return y(idx); };
        va.grad = [n, idx](const Vec&) { return Vec::Unit(n, idx).eval(); };
        va.hess = [n](const Vec&) { return Mat::Zero(n, n).eval(); };
        out.push_back({a, va});
      }
      return out;
    }
    case Model::HyperbolicBall: {
      // V_(0) = (1+|z|^2)/(1-|z|^2), V_(A) = 2 z_A / (1-|z|^2)
      ScalarField v0;
      v0.eval = [](const Vec& z) {
        const double s = z.squaredNorm();
        return (1.0 + s) / (1.0 - s);
      };
      v0.grad = [](const Vec& z) {
        const double sm = 1.0 - z.squaredNorm();
        return (4.0 * z / (sm * sm)).eval();
      };
      v0.hess = [n](const Vec& z) {
        const double sm = 1.0 - z.squaredNorm();
        Mat h = 4.0 * Mat::Identity(n, n) / (sm * sm) +
                16.0 * (z * z.transpose()) / (sm * sm * sm);
        return h;
      };
      out.push_back({0, v0});
      for (int a = 1; a < n; ++a) {
        ScalarField va;
        const int idx = a - 1;
        va.eval = [idx](const Vec& z) {
          return 2.0 * z(idx) / (1.0 - z.squaredNorm());
        };
        va.grad = [n, idx](const Vec& z) {
          const double sm = 1.0 - z.squaredNorm();
          Vec g = (4.0 * z(idx) / (sm * sm)) * z;
          g(idx) += 2.0 / sm;
          return g;
        };
        va.hess = [n, idx](const Vec& z) {
          const double sm = 1.0 - z.squaredNorm();
          const double sm2 = sm * sm, sm3 = sm2 * sm;
          Mat h(n, n);
          auto kd = [idx](int a2) { return a2 == idx ? 1.0 : 0.0; };
          for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l)
              h(k, l) = (4.0 * kd(k) * z(l) + 4.0 * kd(l) * z(k) +
                         (k == l ? 4.0 * z(idx) : 0.0)) / sm2 +
                        16.0 * z(idx) * z(k) * z(l) / sm3;
          return h;
        };
        out.push_back({a, va});
      }
      return out;
    }
  }
  throw InputError("unreachable");
}

std::vector<KillingBasisElement> killing_basis(const ChartDomain& domain) {
  domain.validate();
  const int n = domain.n;
  std::vector<KillingBasisElement> out;
  switch (domain.model) {
    case Model::Flat:
      for (int a = 1; a < n; ++a)
        out.push_back({a, constant_vector_field(Vec::Unit(n, a - 1))});
      return out;
    case Model::HyperbolicPolar: {
      // W_(0) = sqrt(1+|y|^2) d_{y_n}
      VectorField w0;
      w0.eval = [n](const Vec& y) {
        Vec w = Vec::Zero(n);
        w(n - 1) = std::sqrt(1.0 + y.squaredNorm());
        return w;
      };
      w0.jac = [n](const Vec& y) {
        const double x0 = std::sqrt(1.0 + y.squaredNorm());
        Mat j = Mat::Zero(n, n);
        for (int k = 0; k < n; ++k) j(n - 1, k) = y(k) / x0;
        return j;
      };
      w0.hess = [n](const Vec& y) {
        const double x0 = std::sqrt(1.0 + y.squaredNorm());
        Tensor3 hh(n);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            hh(n - 1, i, j) = (i == j ? 1.0 / x0 : 0.0) -
                              y(i) * y(j) / (x0 * x0 * x0);
        return hh;
      };
      out.push_back({0, w0});
      for (int a = 1; a < n; ++a) {
        // W_(A) = y_A d_{y_n} - y_n d_{y_A}
        VectorField wa;
        const int A = a - 1;
        wa.eval = [n, A](const Vec& y) {
          Vec w = Vec::Zero(n);
          w(n - 1) = y(A);
          w(A) = -y(n - 1);
          return w;
        };
        wa.jac = [n, A](const Vec&) {
          Mat j = Mat::Zero(n, n);
          j(n - 1, A) = 1.0;
          j(A, n - 1) = -1.0;
          return j;
        };
        wa.hess = [n](const Vec&) { return Tensor3(n); };
        out.push_back({a, wa});
      }
      return out;
    }
    case Model::HyperbolicBall: {
      // L_{0n} = (1+|z|^2)/2 d_{z_n} - z_n z_j d_{z_j}
      VectorField w0;
      w0.eval = [n](const Vec& z) {
        Vec w = (-z(n - 1)) * z;
        w(n - 1) += 0.5 * (1.0 + z.squaredNorm());
        return w;
      };
      w0.jac = [n](const Vec& z) {
        Mat j = Mat::Zero(n, n);
        for (int i = 0; i < n; ++i)
          for (int k = 0; k < n; ++k) {
            double v = -((k == n - 1 ? z(i) : 0.0) +
                         (k == i ? z(n - 1) : 0.0));
            if (i == n - 1) v += z(k);
            j(i, k) = v;
          }
        return j;
      };
      w0.hess = [n](const Vec&) {
        // W^a = (1+|z|^2)/2 kd(a,n) - z_n z_a
        Tensor3 hh(n);
        for (int a = 0; a < n; ++a)
          for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
              double v = (i == k && a == n - 1 ? 1.0 : 0.0);
              if (i == n - 1 && k == a) v -= 1.0;
              if (k == n - 1 && i == a) v -= 1.0;
              hh(a, i, k) = v;
            }
        return hh;
      };
      out.push_back({0, w0});
      for (int a = 1; a < n; ++a) {
        VectorField wa;
        const int A = a - 1;
        wa.eval = [n, A](const Vec& z) {
          Vec w = Vec::Zero(n);
          w(n - 1) = z(A);
          w(A) = -z(n - 1);
          return w;
        };
        wa.jac = [n, A](const Vec&) {
          Mat j = Mat::Zero(n, n);
          j(n - 1, A) = 1.0;
          j(A, n - 1) = -1.0;
          return j;
        };
        wa.hess = [n](const Vec&) { return Tensor3(n); };
        out.push_back({a, wa});
      }
      return out;
    }
  }
  throw InputError("unreachable");
}

// ------------------------------------------------------------------ isometry

namespace {

Isometry affine_isometry(const ChartDomain& domain, const Mat& R, const Vec& t) {
  Isometry A;
  A.n = domain.n;
  A.model = Model::Flat;
  A.apply = [R, t](const Vec& x) { return (R * x + t).eval(); };
  A.jac = [R](const Vec&) { return R; };
  const int n = domain.n;
  A.hess = [n](const Vec&) { return Tensor3(n); };
  A.d3 = [n](const Vec&) { return Tensor4(n); };
  A.basis_action = R.topLeftCorner(n - 1, n - 1);
  return A;
}

// Polar-chart action of a hyperboloid matrix B (block of O(n,1) on
// coordinates x_0..x_{n-1}, fixing x_n): y -> spatial part of A x(y),
// x(y) = (sqrt(1+|y|^2), y).
Isometry hyperboloid_isometry(const ChartDomain& domain, const Mat& B) {
  const int n = domain.n;
  Mat A = Mat::Identity(n + 1, n + 1);  // rows/cols 0..n
  A.topLeftCorner(n, n) = B;
  Isometry iso;
  iso.n = n;
  iso.model = Model::HyperbolicPolar;
  auto embed = [n](const Vec& y) {
    Vec x(n + 1);
    x(0) = std::sqrt(1.0 + y.squaredNorm());
    x.tail(n) = y;
    return x;
  };
  iso.apply = [A, embed, n](const Vec& y) {
    const Vec x = A * embed(y);
    return x.tail(n).eval();
  };
  iso.jac = [A, n](const Vec& y) {
    const double x0 = std::sqrt(1.0 + y.squaredNorm());
    Mat J(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        J(i, j) = A(i + 1, 0) * y(j) / x0 + A(i + 1, j + 1);
    return J;
  };
  iso.hess = [A, n](const Vec& y) {
    const double x0 = std::sqrt(1.0 + y.squaredNorm());
    const double x03 = x0 * x0 * x0;
    Tensor3 H(n);
    for (int a = 0; a < n; ++a)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          H(a, i, j) = A(a + 1, 0) *
                       ((i == j ? 1.0 / x0 : 0.0) - y(i) * y(j) / x03);
    return H;
  };
  iso.d3 = [A, n](const Vec& y) {
    const double x0 = std::sqrt(1.0 + y.squaredNorm());
    const double x03 = x0 * x0 * x0, x05 = x03 * x0 * x0;
    Tensor4 K(n);
    auto kd = [](int a, int b) { return a == b ? 1.0 : 0.0; };
    for (int a = 0; a < n; ++a)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            K(a, i, j, k) =
                A(a + 1, 0) *
                (-(kd(i, j) * y(k) + kd(i, k) * y(j) + kd(j, k) * y(i)) / x03 +
                 3.0 * y(i) * y(j) * y(k) / x05);
    return K;
  };
  iso.basis_action = B;
  return iso;
}

}  // namespace

Isometry identity_isometry(const ChartDomain& domain) {
  const int n = domain.n;
  if (domain.model == Model::Flat)
    return affine_isometry(domain, Mat::Identity(n, n), Vec::Zero(n));
  return hyperboloid_isometry(domain, Mat::Identity(n, n));
}

Isometry flat_rotation(const ChartDomain& domain, int i, int j, double angle) {
  const int n = domain.n;
  if (i < 0 || j < 0 || i >= n - 1 || j >= n - 1 || i == j)
    throw InvalidIsometryError("flat rotation must act in a boundary-tangent plane");
  Mat R = Mat::Identity(n, n);
  R(i, i) = std::cos(angle);
  R(j, j) = std::cos(angle);
  R(i, j) = -std::sin(angle);
  R(j, i) = std::sin(angle);
  return affine_isometry(domain, R, Vec::Zero(n));
}

Isometry flat_translation(const ChartDomain& domain, const Vec& t) {
  if (std::abs(t(domain.n - 1)) > 0)
    throw InvalidIsometryError("translation must be tangent to the boundary");
  return affine_isometry(domain, Mat::Identity(domain.n, domain.n), t);
}

Isometry hyperbolic_boost(const ChartDomain& domain, int axis, double alpha) {
  const int n = domain.n;
  if (axis < 0 || axis >= n - 1)
    throw InvalidIsometryError("boost axis must avoid the x_n direction");
  Mat B = Mat::Identity(n, n);
  B(0, 0) = std::cosh(alpha);
  B(axis + 1, axis + 1) = std::cosh(alpha);
  B(0, axis + 1) = std::sinh(alpha);
  B(axis + 1, 0) = std::sinh(alpha);
  return hyperboloid_isometry(domain, B);
}

Isometry hyperbolic_rotation(const ChartDomain& domain, int i, int j,
                             double angle) {
  const int n = domain.n;
  if (i < 1 || j < 1 || i >= n || j >= n || i == j)
    throw InvalidIsometryError("rotation plane must avoid x_0 and x_n");
  Mat B = Mat::Identity(n, n);
  B(i, i) = std::cos(angle);
  B(j, j) = std::cos(angle);
  B(i, j) = -std::sin(angle);
  B(j, i) = std::sin(angle);
  return hyperboloid_isometry(domain, B);
}

SymTensorField pullback_sym_tensor(const SymTensorField& T, const Isometry& A) {
  SymTensorField out;
  auto Te = T.eval;
  auto phi = A.apply;
  auto jac = A.jac;
  out.eval = [Te, phi, jac](const Vec& p) {
    const Mat J = jac(p);
    return (J.transpose() * Te(phi(p)) * J).eval();
  };
  if (T.has_deriv() && A.hess) {
    auto Td = T.deriv;
    auto hes = A.hess;
    out.deriv = [Te, Td, phi, jac, hes](const Vec& p) {
      const int n = static_cast<int>(p.size());
      const Vec q = phi(p);
      const Mat J = jac(p);
      const Tensor3 H = hes(p);
      const Mat Tq = Te(q);
      const Tensor3 dT = Td(q);
      Tensor3 out3(n);
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = i; j < n; ++j) {
            double s = 0;
            for (int a = 0; a < n; ++a)
              for (int b = 0; b < n; ++b) {
                s += H(a, i, k) * Tq(a, b) * J(b, j);
                s += J(a, i) * Tq(a, b) * H(b, j, k);
                double dTk = 0;
                for (int c = 0; c < n; ++c) dTk += dT(c, a, b) * J(c, k);
                s += J(a, i) * dTk * J(b, j);
              }
            out3(k, i, j) = out3(k, j, i) = s;
          }
      return out3;
    };
  }
  if (T.has_deriv() && T.has_deriv2() && A.hess && A.d3) {
    auto Td = T.deriv;
    auto Td2 = T.deriv2;
    auto hes = A.hess;
    auto d3 = A.d3;
    out.deriv2 = [Te, Td, Td2, phi, jac, hes, d3](const Vec& p) {
      const int n = static_cast<int>(p.size());
      const Vec q = phi(p);
      const Mat J = jac(p);
      const Tensor3 H = hes(p);
      const Tensor4 K = d3(p);
      const Mat Tq = Te(q);
      const Tensor3 dT = Td(q);
      const Tensor4 ddT = Td2(q);
      // dTk(k,a,b) = d_k [T_ab o phi]
      Tensor3 dTk(n);
      for (int k = 0; k < n; ++k)
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) {
            double s = 0;
            for (int c = 0; c < n; ++c) s += dT(c, a, b) * J(c, k);
            dTk(k, a, b) = s;
          }
      // ddTkl(k,l,a,b) = d_k d_l [T_ab o phi]
      Tensor4 ddTkl(n);
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
              double s = 0;
              for (int c = 0; c < n; ++c) {
                for (int d = 0; d < n; ++d)
                  s += ddT(c, d, a, b) * J(c, k) * J(d, l);
                s += dT(c, a, b) * H(c, k, l);
              }
              ddTkl(k, l, a, b) = s;
            }
      Tensor4 out4(n);
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
              double s = 0;
              for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                  s += K(a, i, k, l) * Tq(a, b) * J(b, j) +
                       J(a, i) * Tq(a, b) * K(b, j, k, l);
                  s += H(a, i, k) * (dTk(l, a, b) * J(b, j) + Tq(a, b) * H(b, j, l));
                  s += H(a, i, l) * (dTk(k, a, b) * J(b, j) + Tq(a, b) * H(b, j, k));
                  s += J(a, i) * (dTk(l, a, b) * H(b, j, k) + dTk(k, a, b) * H(b, j, l));
                  s += J(a, i) * ddTkl(k, l, a, b) * J(b, j);
                }
              out4(k, l, i, j) = s;
            }
      return out4;
    };
  }
  return out;
}

InitialDataSet isometry_apply(const Isometry& A, const InitialDataSet& data) {
  if (A.model != data.domain.model &&
      !(A.model == Model::Flat && data.domain.model == Model::Flat))
    throw InvalidIsometryError("isometry model does not match dataset model");
  // boundary preservation: sampled boundary points must stay on the boundary
  const int n = data.domain.n;
  Rng rng(0x5eedb0a7dull);
  for (int k = 0; k < 16; ++k) {
    Vec p = Vec::Zero(n);
    for (int i = 0; i < n - 1; ++i) p(i) = rng.uniform(-1.0, 1.0);
    if (p.norm() < 1e-6) p(0) = 1.0;
    p *= 1.5 * data.domain.r0 / p.norm();
    if (data.domain.model == Model::HyperbolicBall) p *= 0.3 / p.norm();
    const Vec q = A.apply(p);
    if (std::abs(q(n - 1)) > 1e-10)
      throw InvalidIsometryError("isometry moves a boundary point off the boundary");
  }
  InitialDataSet out = data;
  out.g = pullback_sym_tensor(data.g, A);
  out.h = pullback_sym_tensor(data.h, A);
  // A is a g0-isometry, so A*(g - g0) is again the deviation from g0
  if (data.has_deviation())
    out.deviation = pullback_sym_tensor(data.deviation, A);
  out.name = data.name + "+isometry";
  return out;
}

// --------------------------------------------------------------- Lorentzian

std::string causal_class_name(CausalClass c) {
  switch (c) {
    case CausalClass::Zero: return "zero";
    case CausalClass::TimelikeFuture: return "timelike-future";
    case CausalClass::TimelikePast: return "timelike-past";
    case CausalClass::NullFuture: return "null-future";
    case CausalClass::NullPast: return "null-past";
    case CausalClass::Spacelike: return "spacelike";
  }
  return "?";
}

double lorentz_inner(const Vec& z, const Vec& w) {
  double s = z(0) * w(0);
  for (int i = 1; i < z.size(); ++i) s -= z(i) * w(i);
  return s;
}

CausalClass causal_classify(const Vec& v, double eps) {
  const double n2 = v.squaredNorm();
  if (n2 == 0.0) return CausalClass::Zero;
  const double q = lorentz_inner(v, v);
  if (std::abs(q) <= eps * n2) {
    if (v(0) > 0) return CausalClass::NullFuture;
    if (v(0) < 0) return CausalClass::NullPast;
    return CausalClass::Zero;  // |v|^2 within the null band with v_0 = 0
  }
  if (q > 0)
    return v(0) > 0 ? CausalClass::TimelikeFuture : CausalClass::TimelikePast;
  return CausalClass::Spacelike;
}

Vec polar_to_ball(const Vec& y) {
  const double x0 = std::sqrt(1.0 + y.squaredNorm());
  return (y / (1.0 + x0)).eval();
}

Vec ball_to_polar(const Vec& z) {
  const double sm = 1.0 - z.squaredNorm();
  if (sm <= 0) throw DomainError("ball coordinates require |z| < 1");
  return (2.0 * z / sm).eval();
}

}  // namespace models
}  // namespace decmass
