#include "decmass/fd.hpp"

#include <cmath>

namespace decmass {

double pairwise_sum(const std::vector<double>& v) {
  // fixed reduction tree: split at the largest power of two below size
  struct Impl {
    static double run(const double* a, size_t n) {
      if (n == 0) return 0.0;
      if (n == 1) return a[0];
      if (n == 2) return a[0] + a[1];
      size_t half = 1;
      while (half * 2 < n) half *= 2;
      return run(a, half) + run(a + half, n - half);
    }
  };
  return Impl::run(v.data(), v.size());
}

double default_step(const Vec& p) { return 1e-4 * std::max(1.0, p.norm()); }

double fd_step(const Vec& p, const FdOptions& opt) {
  return opt.step > 0.0 ? opt.step : default_step(p);
}

namespace {

double check_finite(double v) {
  if (!std::isfinite(v)) throw EvalError("non-finite field value in FD stencil");
  return v;
}

// First difference in direction `dir`, honoring the half-space boundary.
double first_diff(const std::function<double(const Vec&)>& f, const Vec& p,
                  int dir, double h, const FdOptions& opt) {
  const int n = static_cast<int>(p.size());
  Vec e = Vec::Zero(n);
  e(dir) = 1.0;
  const bool boundary_dir = opt.halfspace && dir == n - 1;
  if (boundary_dir && p(dir) < 0.0)
    throw StencilError("FD stencil exits domain on both sides");
  const bool minus_ok = !boundary_dir || p(dir) - h >= 0.0;
  if (minus_ok) {
    return (check_finite(f(p + h * e)) - check_finite(f(p - h * e))) / (2.0 * h);
  }
  // one-sided 2nd order: (-3 f0 + 4 f1 - f2) / (2h)
  return (-3.0 * check_finite(f(p)) + 4.0 * check_finite(f(p + h * e)) -
          check_finite(f(p + 2.0 * h * e))) /
         (2.0 * h);
}

}  // namespace

Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& p,
                const FdOptions& opt) {
  const int n = static_cast<int>(p.size());
  const double h = fd_step(p, opt);
  Vec g(n);
  for (int i = 0; i < n; ++i) g(i) = first_diff(f, p, i, h, opt);
  return g;
}

double fd_partial(const std::function<double(const Vec&)>& f, const Vec& p,
                  int dir, const FdOptions& opt) {
  return first_diff(f, p, dir, fd_step(p, opt), opt);
}

double fd_partial2(const std::function<double(const Vec&)>& f, const Vec& p,
                   int i, int j, const FdOptions& opt) {
  const double h = fd_step(p, opt);
  FdOptions inner = opt;
  inner.step = h;
  auto di = [&](const Vec& q) { return first_diff(f, q, i, h, opt); };
  return first_diff(di, p, j, h, inner);
}

double fd_derivative(const ScalarField& f, const Vec& p,
                     const std::vector<int>& multi_index, const FdOptions& opt) {
  if (multi_index.size() == 1) {
    if (opt.use_analytic && f.has_grad()) return f.grad(p)(multi_index[0]);
    return fd_partial(f.eval, p, multi_index[0], opt);
  }
  if (multi_index.size() == 2) {
    if (opt.use_analytic && f.has_hess())
      return f.hess(p)(multi_index[0], multi_index[1]);
    return fd_partial2(f.eval, p, multi_index[0], multi_index[1], opt);
  }
  throw InputError("fd_derivative supports orders 1 and 2");
}

Mat fd_derivative(const SymTensorField& T, const Vec& p,
                  const std::vector<int>& multi_index, const FdOptions& opt) {
  const int n = static_cast<int>(p.size());
  Mat out(n, n);
  if (multi_index.size() == 1 && opt.use_analytic && T.has_deriv()) {
    const Tensor3 d = T.deriv(p);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) out(a, b) = d(multi_index[0], a, b);
    return out;
  }
  if (multi_index.size() == 2 && opt.use_analytic && T.has_deriv2()) {
    const Tensor4 d = T.deriv2(p);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        out(a, b) = d(multi_index[0], multi_index[1], a, b);
    return out;
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      auto comp = [&](const Vec& q) { return T.eval(q)(a, b); };
      if (multi_index.size() == 1)
        out(a, b) = fd_partial(comp, p, multi_index[0], opt);
      else if (multi_index.size() == 2)
        out(a, b) = fd_partial2(comp, p, multi_index[0], multi_index[1], opt);
      else
        throw InputError("fd_derivative supports orders 1 and 2");
    }
  return out;
}

Vec grad_of(const ScalarField& f, const Vec& p, const FdOptions& opt) {
  if (opt.use_analytic && f.has_grad()) return f.grad(p);
  return fd_gradient(f.eval, p, opt);
}

Mat hess_of(const ScalarField& f, const Vec& p, const FdOptions& opt) {
  const int n = static_cast<int>(p.size());
  if (opt.use_analytic && f.has_hess()) return f.hess(p);
  Mat H(n, n);
  if (opt.use_analytic && f.has_grad()) {
    // one FD level on the analytic gradient
    for (int j = 0; j < n; ++j)
      for (int i = 0; i <= j; ++i) {
        auto gi = [&](const Vec& q) { return f.grad(q)(i); };
        H(i, j) = H(j, i) = fd_partial(gi, p, j, opt);
      }
    return H;
  }
  for (int j = 0; j < n; ++j)
    for (int i = 0; i <= j; ++i) H(i, j) = H(j, i) = fd_partial2(f.eval, p, i, j, opt);
  return H;
}

Mat jac_of(const VectorField& W, const Vec& p, const FdOptions& opt) {
  const int n = static_cast<int>(p.size());
  if (opt.use_analytic && W.has_jac()) return W.jac(p);
  Mat J(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      auto comp = [&](const Vec& q) { return W.eval(q)(i); };
      J(i, j) = fd_partial(comp, p, j, opt);
    }
  return J;
}

Tensor3 hess_of(const VectorField& W, const Vec& p, const FdOptions& opt) {
  const int n = static_cast<int>(p.size());
  if (opt.use_analytic && W.has_hess()) return W.hess(p);
  Tensor3 H(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double v;
        if (opt.use_analytic && W.has_jac()) {
          auto comp = [&](const Vec& q) { return W.jac(q)(k, j); };
          v = fd_partial(comp, p, i, opt);
        } else {
          auto comp = [&](const Vec& q) { return W.eval(q)(k); };
          v = fd_partial2(comp, p, i, j, opt);
        }
        H(k, i, j) = H(k, j, i) = v;
      }
  return H;
}

Tensor3 deriv_of(const SymTensorField& T, const Vec& p, const FdOptions& opt) {
  const int n = static_cast<int>(p.size());
  if (opt.use_analytic && T.has_deriv()) return T.deriv(p);
  Tensor3 D(n);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      auto comp = [&](const Vec& q) { return T.eval(q)(a, b); };
      for (int k = 0; k < n; ++k) {
        double v = fd_partial(comp, p, k, opt);
        D(k, a, b) = D(k, b, a) = v;
      }
    }
  return D;
}

Tensor4 deriv2_of(const SymTensorField& T, const Vec& p, const FdOptions& opt) {
  const int n = static_cast<int>(p.size());
  if (opt.use_analytic && T.has_deriv2()) return T.deriv2(p);
  Tensor4 D(n);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      for (int k = 0; k < n; ++k)
        for (int l = k; l < n; ++l) {
          double v;
          if (opt.use_analytic && T.has_deriv()) {
            auto comp = [&](const Vec& q) { return T.deriv(q)(k, a, b); };
            v = fd_partial(comp, p, l, opt);
          } else {
            auto comp = [&](const Vec& q) { return T.eval(q)(a, b); };
            v = fd_partial2(comp, p, k, l, opt);
          }
          D(k, l, a, b) = D(l, k, a, b) = v;
          D(k, l, b, a) = D(l, k, b, a) = v;
        }
    }
  return D;
}

SymTensorField add_fields(const SymTensorField& a, const SymTensorField& b) {
  SymTensorField out;
  auto ea = a.eval, eb = b.eval;
  out.eval = [ea, eb](const Vec& p) { return (ea(p) + eb(p)).eval(); };
  if (a.has_deriv() && b.has_deriv()) {
    auto da = a.deriv, db = b.deriv;
    out.deriv = [da, db](const Vec& p) {
      Tensor3 x = da(p), y = db(p);
      const int n = x.dim();
      Tensor3 r(n);
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) r(k, i, j) = x(k, i, j) + y(k, i, j);
      return r;
    };
  }
  if (a.has_deriv2() && b.has_deriv2()) {
    auto da = a.deriv2, db = b.deriv2;
    out.deriv2 = [da, db](const Vec& p) {
      Tensor4 x = da(p), y = db(p);
      const int n = x.dim();
      Tensor4 r(n);
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              r(k, l, i, j) = x(k, l, i, j) + y(k, l, i, j);
      return r;
    };
  }
  return out;
}

}  // namespace decmass
