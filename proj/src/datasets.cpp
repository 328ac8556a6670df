#include "decmass/datasets.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "decmass/constraints.hpp"

namespace decmass {
namespace data {

namespace fs = std::filesystem;
using models::ChartDomain;
using models::Model;

namespace {

// ----------------------------------------------------------- gaussian bumps

struct Bump {
  Vec center;
  double width = 1.0;
  double value(const Vec& x) const {
    return std::exp(-(x - center).squaredNorm() / (width * width));
  }
  Vec grad(const Vec& x) const {
    return (-2.0 / (width * width)) * value(x) * (x - center);
  }
  Mat hess(const Vec& x) const {
    const Vec d = x - center;
    const double w2 = width * width;
    const double e = value(x);
    return e * (4.0 / (w2 * w2) * (d * d.transpose()) -
                2.0 / w2 * Mat::Identity(x.size(), x.size()));
  }
};

std::vector<Bump> seeded_bumps(int n, Rng* rng, int count, double rmax) {
  std::vector<Bump> bumps;
  for (int c = 0; c < count; ++c) {
    Bump b;
    b.center = Vec(n);
    for (int i = 0; i < n; ++i) b.center(i) = rng->uniform(-rmax, rmax);
    b.center(n - 1) = std::abs(b.center(n - 1));
    b.width = rng->uniform(0.7, 1.4);
    bumps.push_back(b);
  }
  return bumps;
}

}  // namespace

ScalarField random_bump_scalar(int n, uint64_t seed, double amplitude) {
  Rng rng(seed ^ 0x5ca1a7ull);
  auto bumps = seeded_bumps(n, &rng, 2, 2.0);
  std::vector<double> coef;
  for (size_t c = 0; c < bumps.size(); ++c)
    coef.push_back(rng.uniform(-amplitude, amplitude));
  ScalarField f;
  f.eval = [bumps, coef](const Vec& x) {
    double s = 0;
    for (size_t c = 0; c < bumps.size(); ++c) s += coef[c] * bumps[c].value(x);
    return s;
  };
  f.grad = [bumps, coef](const Vec& x) {
    Vec g = Vec::Zero(x.size());
    for (size_t c = 0; c < bumps.size(); ++c) g += coef[c] * bumps[c].grad(x);
    return g;
  };
  f.hess = [bumps, coef](const Vec& x) {
    Mat h = Mat::Zero(x.size(), x.size());
    for (size_t c = 0; c < bumps.size(); ++c) h += coef[c] * bumps[c].hess(x);
    return h;
  };
  return f;
}

VectorField random_bump_vector(int n, uint64_t seed, double amplitude,
                               bool boundary_tangent) {
  Rng rng(seed ^ 0xb0b5ull);
  auto bumps = seeded_bumps(n, &rng, 2, 2.0);
  Mat coef(n, bumps.size());
  for (int i = 0; i < n; ++i)
    for (size_t c = 0; c < bumps.size(); ++c)
      coef(i, c) = rng.uniform(-amplitude, amplitude);
  if (boundary_tangent)
    for (size_t c = 0; c < bumps.size(); ++c) coef(n - 1, c) = 0.0;
  VectorField f;
  f.eval = [bumps, coef, n](const Vec& x) {
    Vec v = Vec::Zero(n);
    for (size_t c = 0; c < bumps.size(); ++c)
      v += coef.col(c) * bumps[c].value(x);
    return v;
  };
  f.jac = [bumps, coef, n](const Vec& x) {
    Mat j = Mat::Zero(n, n);
    for (size_t c = 0; c < bumps.size(); ++c)
      j += coef.col(c) * bumps[c].grad(x).transpose();
    return j;
  };
  f.hess = [bumps, coef, n](const Vec& x) {
    Tensor3 t(n);
    for (size_t c = 0; c < bumps.size(); ++c) {
      const Mat h = bumps[c].hess(x);
      for (int a = 0; a < n; ++a)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) t(a, i, j) += coef(a, c) * h(i, j);
    }
    return t;
  };
  return f;
}

SymTensorField random_bump_sym(int n, uint64_t seed, double amplitude) {
  Rng rng(seed ^ 0x7e4500ull);
  auto bumps = seeded_bumps(n, &rng, 2, 2.0);
  std::vector<Mat> coef;
  for (size_t c = 0; c < bumps.size(); ++c) {
    Mat A(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) A(i, j) = A(j, i) = rng.uniform(-amplitude, amplitude);
    coef.push_back(A);
  }
  SymTensorField f;
  f.eval = [bumps, coef, n](const Vec& x) {
    Mat v = Mat::Zero(n, n);
    for (size_t c = 0; c < bumps.size(); ++c) v += coef[c] * bumps[c].value(x);
    return v;
  };
  f.deriv = [bumps, coef, n](const Vec& x) {
    Tensor3 t(n);
    for (size_t c = 0; c < bumps.size(); ++c) {
      const Vec g = bumps[c].grad(x);
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) t(k, i, j) += coef[c](i, j) * g(k);
    }
    return t;
  };
  f.deriv2 = [bumps, coef, n](const Vec& x) {
    Tensor4 t(n);
    for (size_t c = 0; c < bumps.size(); ++c) {
      const Mat h = bumps[c].hess(x);
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              t(k, l, i, j) += coef[c](i, j) * h(k, l);
    }
    return t;
  };
  return f;
}

// ------------------------------------------------------------- descriptors

DatasetDescriptor default_descriptor(const std::string& example, int n) {
  DatasetDescriptor d;
  d.example = example;
  d.n = n;
  if (example == "flat-trivial") {
    d.model = Model::Flat;
    d.decay_exponent = 1.0;
    d.r0 = 1.0;
  } else if (example == "schwarzschild") {
    d.model = Model::Flat;
    d.decay_exponent = 1.0;
    d.r0 = 2.0;
    d.params["mass"] = 1.0;
  } else if (example == "bowen-york") {
    d.model = Model::Flat;
    d.decay_exponent = 1.0;
    d.r0 = 1.0;
    d.params["momentum"] = {0.1, 0.0, 0.0};
  } else if (example == "conformal-bump") {
    d.model = Model::Flat;
    d.decay_exponent = 1.0;
    d.r0 = 1.0;
    d.params["amplitude"] = 0.05;
    d.params["width"] = 1.5;
    d.params["tail_amplitude"] = 0.0;
    d.params["tail_exponent"] = 0.0;
  } else if (example == "hyperbolic-trivial") {
    d.model = Model::HyperbolicPolar;
    d.decay_exponent = 2.0;
    d.r0 = 1.0;
  } else if (example == "ads-schwarzschild") {
    d.model = Model::HyperbolicPolar;
    d.decay_exponent = static_cast<double>(n);
    d.r0 = 1.0;
    d.params["mass"] = 0.1;
  } else if (example == "gauge-perturbation") {
    d.model = Model::HyperbolicPolar;
    d.decay_exponent = 3.0;
    d.r0 = 1.0;
    d.params["bump_amplitude"] = 0.05;
    d.params["bump_width"] = 1.0;
    d.params["rot_amplitude"] = 0.05;
    d.params["rot_power"] = 4.0;
  } else if (example == "custom-grid") {
    d.model = Model::Flat;
    d.decay_exponent = 1.0;
    d.r0 = 1.0;
  } else {
    throw InputError("unknown example: " + example);
  }
  return d;
}

json descriptor_to_json(const DatasetDescriptor& d) {
  json j;
  j["format"] = "decmass-dataset";
  j["version"] = 1;
  j["example"] = d.example;
  j["n"] = d.n;
  j["model"] = models::model_name(d.model);
  j["r0"] = d.r0;
  j["decay_exponent"] = d.decay_exponent;
  j["seed"] = d.seed;
  j["params"] = d.params;
  if (!d.grid_file.empty()) j["grid_file"] = d.grid_file;
  return j;
}

DatasetDescriptor descriptor_from_json(const json& j) {
  if (!j.contains("format") || j["format"] != "decmass-dataset")
    throw InputError("not a decmass dataset file");
  DatasetDescriptor d;
  d.example = j.at("example").get<std::string>();
  d.n = j.at("n").get<int>();
  d.model = models::model_from_name(j.at("model").get<std::string>());
  d.r0 = j.at("r0").get<double>();
  d.decay_exponent = j.at("decay_exponent").get<double>();
  d.seed = j.value("seed", 0ull);
  d.params = j.value("params", json::object());
  d.grid_file = j.value("grid_file", std::string());
  return d;
}

void write_dataset(const std::string& path, const DatasetDescriptor& d) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write dataset file: " + path);
  out << descriptor_to_json(d).dump(2) << "\n";
}

DatasetDescriptor load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read dataset file: " + path);
  json j;
  in >> j;
  return descriptor_from_json(j);
}

// ------------------------------------------------------------------ builders

namespace {

InitialDataSet base_data(const DatasetDescriptor& d) {
  InitialDataSet data;
  data.domain = ChartDomain{d.n, d.model, d.r0};
  data.domain.validate();
  data.decay_exponent = d.decay_exponent;
  data.lambda = data.domain.matching_lambda();
  data.name = d.example;
  data.g = models::reference_metric(data.domain);
  data.h = zero_sym_tensor_field();
  data.deviation = zero_sym_tensor_field();
  return data;
}

InitialDataSet build_schwarzschild(const DatasetDescriptor& d) {
  InitialDataSet data = base_data(d);
  const double m = d.param("mass", 1.0);
  if (m < 0) throw InputError("schwarzschild mass must be >= 0");
  const int n = d.n;
  if (n != 3)
    throw InputError("the schwarzschild example uses the n = 3 conformal slice");
  auto phi = [m](const Vec& x) { return 1.0 + 0.5 * m / x.norm(); };
  auto dphi = [m](const Vec& x) {
    const double r = x.norm();
    return (-(0.5 * m) / (r * r * r) * x).eval();
  };
  auto ddphi = [m, n](const Vec& x) {
    const double r = x.norm();
    return ((0.5 * m) *
            (3.0 * (x * x.transpose()) / std::pow(r, 5) -
             Mat::Identity(n, n) / (r * r * r)))
        .eval();
  };
  // f = (phi^4 - 1) delta evaluated without cancellation:
  // phi^4 - 1 = t (4 + 6t + 4t^2 + t^3), t = m/2r
  SymTensorField f;
  f.eval = [m, n](const Vec& x) {
    const double t = 0.5 * m / x.norm();
    const double u = t * (4.0 + t * (6.0 + t * (4.0 + t)));
    return (u * Mat::Identity(n, n)).eval();
  };
  f.deriv = [phi, dphi, n](const Vec& x) {
    const double p = phi(x);
    const Vec dp = dphi(x);
    Tensor3 t(n);
    for (int k = 0; k < n; ++k) {
      const double v = 4.0 * p * p * p * dp(k);
      for (int i = 0; i < n; ++i) t(k, i, i) = v;
    }
    return t;
  };
  f.deriv2 = [phi, dphi, ddphi, n](const Vec& x) {
    const double p = phi(x);
    const Vec dp = dphi(x);
    const Mat d2p = ddphi(x);
    Tensor4 t(n);
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        const double v =
            12.0 * p * p * dp(k) * dp(l) + 4.0 * p * p * p * d2p(k, l);
        for (int i = 0; i < n; ++i) t(k, l, i, i) = v;
      }
    return t;
  };
  data.deviation = f;
  data.g = add_fields(models::reference_metric(data.domain), f);
  return data;
}

InitialDataSet build_bowen_york(const DatasetDescriptor& d) {
  if (d.n != 3) throw InputError("bowen-york data is the n = 3 family");
  InitialDataSet data = base_data(d);
  const Vec p = d.vec_param("momentum", Vec::Zero(3));
  if (p.size() != 3) throw InputError("momentum must have 3 components");
  const int n = 3;
  SymTensorField h;
  h.eval = [p, n](const Vec& x) {
    const double r = x.norm();
    const Vec nn = x / r;
    const double pn = p.dot(nn);
    Mat A = p * nn.transpose() + nn * p.transpose() -
            (Mat::Identity(n, n) - nn * nn.transpose()) * pn;
    return (1.5 / (r * r) * A).eval();
  };
  h.deriv = [p, n](const Vec& x) {
    const double r = x.norm();
    const Vec nn = x / r;
    const double pn = p.dot(nn);
    const Mat proj = Mat::Identity(n, n) - nn * nn.transpose();
    const Mat A = p * nn.transpose() + nn * p.transpose() - proj * pn;
    Tensor3 t(n);
    for (int k = 0; k < n; ++k) {
      // d_k n_i = (delta_ik - n_i n_k)/r, d_k (p.n) = (p_k - pn n_k)/r
      Vec dn(n);
      for (int i = 0; i < n; ++i) dn(i) = ((i == k ? 1.0 : 0.0) - nn(i) * nn(k)) / r;
      const double dpn = (p(k) - pn * nn(k)) / r;
      Mat dA = p * dn.transpose() + dn * p.transpose();
      dA += (dn * nn.transpose() + nn * dn.transpose()) * pn - proj * dpn;
      const Mat hk = 1.5 * (dA / (r * r) - 2.0 * nn(k) / (r * r * r) * A);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) t(k, i, j) = hk(i, j);
    }
    return t;
  };
  data.h = h;
  return data;
}

InitialDataSet build_conformal_bump(const DatasetDescriptor& d) {
  InitialDataSet data = base_data(d);
  const int n = d.n;
  const double a = d.param("amplitude", 0.05);
  const double w = d.param("width", 1.5);
  const double at = d.param("tail_amplitude", 0.0);
  const double q = d.param("tail_exponent", 0.0);
  if (std::abs(a) + std::abs(at) >= 0.9)
    throw InputError("conformal-bump amplitudes must keep g positive definite");
  Vec c = d.vec_param("center", Vec::Zero(n));
  c(n - 1) = std::abs(c(n - 1));
  Bump bump{c, w};
  // phi = a * bump + at * (1 + |x|^2)^{-q/2}
  auto tail = [at, q](const Vec& x) {
    return at * std::pow(1.0 + x.squaredNorm(), -0.5 * q);
  };
  auto dtail = [at, q](const Vec& x) {
    const double s = 1.0 + x.squaredNorm();
    return (at * (-q) * std::pow(s, -0.5 * q - 1.0) * x).eval();
  };
  auto ddtail = [at, q](const Vec& x) {
    const int nn = static_cast<int>(x.size());
    const double s = 1.0 + x.squaredNorm();
    return (at * (-q) * std::pow(s, -0.5 * q - 1.0) * Mat::Identity(nn, nn) +
            at * q * (q + 2.0) * std::pow(s, -0.5 * q - 2.0) * (x * x.transpose()))
        .eval();
  };
  SymTensorField g;
  g.eval = [bump, a, tail, n](const Vec& x) {
    return ((1.0 + a * bump.value(x) + tail(x)) * Mat::Identity(n, n)).eval();
  };
  g.deriv = [bump, a, dtail, n](const Vec& x) {
    const Vec dp = a * bump.grad(x) + dtail(x);
    Tensor3 t(n);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i) t(k, i, i) = dp(k);
    return t;
  };
  g.deriv2 = [bump, a, ddtail, n](const Vec& x) {
    const Mat d2 = a * bump.hess(x) + ddtail(x);
    Tensor4 t(n);
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i) t(k, l, i, i) = d2(k, l);
    return t;
  };
  SymTensorField f = g;
  f.eval = [bump, a, tail, n](const Vec& x) {
    return ((a * bump.value(x) + tail(x)) * Mat::Identity(n, n)).eval();
  };
  data.deviation = f;
  data.g = g;
  return data;
}

InitialDataSet build_ads_schwarzschild(const DatasetDescriptor& d) {
  if (d.model != Model::HyperbolicPolar)
    throw InputError("ads-schwarzschild is built in the polar model");
  InitialDataSet data = base_data(d);
  const int n = d.n;
  const double m = d.param("mass", 0.1);
  if (m < 0) throw InputError("ads-schwarzschild mass must be >= 0");
  // W_m(r) = 1 + r^2 - 2 m r^{2-n} must stay positive on the domain
  if (1.0 + d.r0 * d.r0 - 2.0 * m * std::pow(d.r0, 2 - n) <= 0.0)
    throw InputError("r0 lies inside the ads-schwarzschild horizon");
  // f_ij = u(r) n_i n_j with u = 1/W_m - 1/W_0 = 2 m r^{2-n} / (W_0 W_m),
  // the quotient form avoids the large-radius cancellation
  auto u_fun = [m, n](double r, double* du, double* ddu) {
    const double W0 = 1.0 + r * r;
    const double Wm = W0 - 2.0 * m * std::pow(r, 2 - n);
    const double W0p = 2.0 * r;
    const double Wmp = 2.0 * r - 2.0 * m * (2 - n) * std::pow(r, 1 - n);
    const double W0pp = 2.0;
    const double Wmpp = 2.0 - 2.0 * m * (2 - n) * (1 - n) * std::pow(r, -n);
    const double D = 2.0 * m * std::pow(r, 2 - n);
    const double Dp = 2.0 * m * (2 - n) * std::pow(r, 1 - n);
    const double Dpp = 2.0 * m * (2 - n) * (1 - n) * std::pow(r, -n);
    const double P = W0 * Wm;
    const double Pp = W0p * Wm + W0 * Wmp;
    const double Ppp = W0pp * Wm + 2.0 * W0p * Wmp + W0 * Wmpp;
    const double u = D / P;
    if (du) *du = Dp / P - D * Pp / (P * P);
    if (ddu)
      *ddu = Dpp / P - (2.0 * Dp * Pp + D * Ppp) / (P * P) +
             2.0 * D * Pp * Pp / (P * P * P);
    return u;
  };
  SymTensorField f;
  f.eval = [u_fun](const Vec& y) {
    const double r = y.norm();
    const double u = u_fun(r, nullptr, nullptr);
    const Vec nn = y / r;
    return (u * (nn * nn.transpose())).eval();
  };
  f.deriv = [u_fun](const Vec& y) {
    const int n2 = static_cast<int>(y.size());
    const double r = y.norm();
    double du;
    const double u = u_fun(r, &du, nullptr);
    const Vec nn = y / r;
    Tensor3 t(n2);
    for (int k = 0; k < n2; ++k) {
      Vec dn(n2);
      for (int i = 0; i < n2; ++i)
        dn(i) = ((i == k ? 1.0 : 0.0) - nn(i) * nn(k)) / r;
      for (int i = 0; i < n2; ++i)
        for (int j = 0; j < n2; ++j)
          t(k, i, j) = du * nn(k) * nn(i) * nn(j) +
                       u * (dn(i) * nn(j) + nn(i) * dn(j));
    }
    return t;
  };
  f.deriv2 = [u_fun](const Vec& y) {
    const int n2 = static_cast<int>(y.size());
    const double r = y.norm();
    double du, ddu;
    const double u = u_fun(r, &du, &ddu);
    const Vec nn = y / r;
    auto kd = [](int a, int b2) { return a == b2 ? 1.0 : 0.0; };
    Tensor4 t(n2);
    // dP(k,i,j) = d_k (n_i n_j), ddP below is d_l of it
    Tensor3 dP(n2);
    for (int k = 0; k < n2; ++k)
      for (int i = 0; i < n2; ++i)
        for (int j = 0; j < n2; ++j)
          dP(k, i, j) = (kd(i, k) * nn(j) + kd(j, k) * nn(i) -
                         2.0 * nn(i) * nn(j) * nn(k)) / r;
    for (int k = 0; k < n2; ++k)
      for (int l = 0; l < n2; ++l)
        for (int i = 0; i < n2; ++i)
          for (int j = 0; j < n2; ++j) {
            double ddP =
                (kd(i, k) * ((kd(j, l) - nn(j) * nn(l)) / r) +
                 kd(j, k) * ((kd(i, l) - nn(i) * nn(l)) / r) -
                 2.0 * ((kd(i, l) - nn(i) * nn(l)) / r) * nn(j) * nn(k) -
                 2.0 * nn(i) * ((kd(j, l) - nn(j) * nn(l)) / r) * nn(k) -
                 2.0 * nn(i) * nn(j) * ((kd(k, l) - nn(k) * nn(l)) / r)) / r -
                dP(k, i, j) * nn(l) / r;
            t(k, l, i, j) = ddu * nn(l) * nn(k) * nn(i) * nn(j) +
                            du * ((kd(k, l) - nn(k) * nn(l)) / r) * nn(i) * nn(j) +
                            du * nn(k) * dP(l, i, j) +
                            du * nn(l) * dP(k, i, j) + u * ddP;
          }
    return t;
  };
  data.deviation = f;
  data.g = add_fields(models::reference_metric(data.domain), f);
  return data;
}

InitialDataSet build_gauge_perturbation(const DatasetDescriptor& d) {
  if (d.model != Model::HyperbolicPolar)
    throw InputError("gauge-perturbation is built in the polar model");
  InitialDataSet data = base_data(d);
  const int n = d.n;
  const double ab = d.param("bump_amplitude", 0.05);
  const double wb = d.param("bump_width", 1.0);
  const double ar = d.param("rot_amplitude", 0.05);
  const double q = d.param("rot_power", 4.0);
  Vec c = Vec::Zero(n);
  c(0) = 2.0;
  c(n - 1) = 1.0;
  Bump bump{c, wb};
  // zeta = ab * bump * e_1 + ar * r^{-q} (y_1 d_2 - y_2 d_1); both tangent
  // to the boundary {y_n = 0}
  VectorField zeta;
  zeta.eval = [bump, ab, ar, q, n](const Vec& y) {
    Vec v = Vec::Zero(n);
    v(0) = ab * bump.value(y);
    const double rho = ar * std::pow(y.norm(), -q);
    v(0) += -rho * y(1);
    v(1) += rho * y(0);
    return v;
  };
  zeta.jac = [bump, ab, ar, q, n](const Vec& y) {
    Mat J = Mat::Zero(n, n);
    const Vec g = ab * bump.grad(y);
    for (int k = 0; k < n; ++k) J(0, k) = g(k);
    const double r = y.norm();
    const double rho = ar * std::pow(r, -q);
    for (int k = 0; k < n; ++k) {
      const double drho = -q * ar * std::pow(r, -q - 2.0) * y(k);
      J(0, k) += -drho * y(1) - (k == 1 ? rho : 0.0);
      J(1, k) += drho * y(0) + (k == 0 ? rho : 0.0);
    }
    return J;
  };
  zeta.hess = [bump, ab, ar, q, n](const Vec& y) {
    Tensor3 H(n);
    const Mat hb = ab * bump.hess(y);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) H(0, i, j) = hb(i, j);
    const double r = y.norm();
    auto kd = [](int a, int b2) { return a == b2 ? 1.0 : 0.0; };
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        const double drho_k = -q * ar * std::pow(r, -q - 2.0) * y(k);
        const double drho_l = -q * ar * std::pow(r, -q - 2.0) * y(l);
        const double ddrho = -q * ar * std::pow(r, -q - 2.0) * kd(k, l) +
                             q * (q + 2.0) * ar * std::pow(r, -q - 4.0) * y(k) * y(l);
        H(0, k, l) += -ddrho * y(1) - drho_k * kd(l, 1) - drho_l * kd(k, 1);
        H(1, k, l) += ddrho * y(0) + drho_k * kd(l, 0) + drho_l * kd(k, 0);
      }
    return H;
  };
  const SymTensorField f = constraints::lie_derivative_metric(data.domain, zeta);
  data.deviation = f;
  data.g = add_fields(models::reference_metric(data.domain), f);
  return data;
}

// ------------------------------------------------------------- custom grids

struct GridData {
  std::array<int, 3> dims;
  Vec origin, spacing;
  std::vector<double> values;  // 12 per point: g (6) then h (6), upper tri
  static constexpr int kFields = 12;

  size_t point_index(int i, int j, int k) const {
    return (static_cast<size_t>(i) * dims[1] + j) * dims[2] + k;
  }
  void sample(int i, int j, int k, Mat* g, Mat* h) const {
    const double* v = values.data() + point_index(i, j, k) * kFields;
    const int order[6][2] = {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}};
    *g = Mat(3, 3);
    *h = Mat(3, 3);
    for (int c = 0; c < 6; ++c) {
      (*g)(order[c][0], order[c][1]) = v[c];
      (*g)(order[c][1], order[c][0]) = v[c];
      (*h)(order[c][0], order[c][1]) = v[6 + c];
      (*h)(order[c][1], order[c][0]) = v[6 + c];
    }
  }
  // trilinear interpolation, clamped to the grid box
  void interpolate(const Vec& x, Mat* g, Mat* h) const {
    double t[3];
    int i0[3];
    for (int a = 0; a < 3; ++a) {
      double s = (x(a) - origin(a)) / spacing(a);
      s = std::min(std::max(s, 0.0), static_cast<double>(dims[a] - 1));
      i0[a] = std::min(static_cast<int>(s), dims[a] - 2);
      t[a] = s - i0[a];
    }
    *g = Mat::Zero(3, 3);
    *h = Mat::Zero(3, 3);
    for (int di = 0; di < 2; ++di)
      for (int dj = 0; dj < 2; ++dj)
        for (int dk = 0; dk < 2; ++dk) {
          const double w = (di ? t[0] : 1 - t[0]) * (dj ? t[1] : 1 - t[1]) *
                           (dk ? t[2] : 1 - t[2]);
          Mat gc, hc;
          sample(i0[0] + di, i0[1] + dj, i0[2] + dk, &gc, &hc);
          *g += w * gc;
          *h += w * hc;
        }
  }
};

GridData load_grid(const std::string& header_path) {
  std::ifstream in(header_path);
  if (!in) throw InputError("cannot read grid header: " + header_path);
  json j;
  in >> j;
  GridData grid;
  const auto dims = j.at("dims");
  if (dims.size() != 3)
    throw InputError("grid header: dims must have 3 entries (n = 3 grids)");
  for (int a = 0; a < 3; ++a) grid.dims[a] = dims[a].get<int>();
  grid.origin = Vec(3);
  grid.spacing = Vec(3);
  for (int a = 0; a < 3; ++a) {
    grid.origin(a) = j.at("origin")[a].get<double>();
    grid.spacing(a) = j.at("spacing")[a].get<double>();
    if (grid.dims[a] < 2 || grid.spacing(a) <= 0)
      throw InputError("grid header: need dims >= 2 and positive spacing");
  }
  if (std::abs(grid.origin(2)) > 1e-14)
    throw InputError("grid header: the z-origin must sit on the boundary face");
  const auto fields = j.at("fields");
  if (fields.size() != 2 || fields[0] != "g" || fields[1] != "h")
    throw InputError("grid header: fields must be [\"g\", \"h\"]");
  const std::string data_file = j.at("data_file").get<std::string>();
  const fs::path raw = fs::path(header_path).parent_path() / data_file;
  std::ifstream bin(raw, std::ios::binary);
  if (!bin) throw InputError("cannot read grid data file: " + raw.string());
  const size_t npts = static_cast<size_t>(grid.dims[0]) * grid.dims[1] * grid.dims[2];
  grid.values.resize(npts * GridData::kFields);
  bin.read(reinterpret_cast<char*>(grid.values.data()),
           static_cast<std::streamsize>(grid.values.size() * sizeof(double)));
  if (static_cast<size_t>(bin.gcount()) != grid.values.size() * sizeof(double))
    throw InputError("grid data file size does not match header dims");
  char extra;
  if (bin.read(&extra, 1))
    throw InputError("grid data file size does not match header dims");
  return grid;
}

InitialDataSet build_custom_grid(const DatasetDescriptor& d) {
  if (d.n != 3) throw InputError("custom-grid supports n = 3");
  if (d.grid_file.empty())
    throw InputError("custom-grid requires a grid_file");
  InitialDataSet data = base_data(d);
  auto grid = std::make_shared<GridData>(load_grid(d.grid_file));
  SymTensorField g, h;
  g.eval = [grid](const Vec& x) {
    Mat gm, hm;
    grid->interpolate(x, &gm, &hm);
    return gm;
  };
  h.eval = [grid](const Vec& x) {
    Mat gm, hm;
    grid->interpolate(x, &gm, &hm);
    return hm;
  };
  data.g = g;
  data.h = h;
  data.deviation = SymTensorField{};
  return data;
}

}  // namespace

InitialDataSet build_dataset(const DatasetDescriptor& d) {
  if (d.example == "flat-trivial" || d.example == "hyperbolic-trivial")
    return base_data(d);
  if (d.example == "schwarzschild") return build_schwarzschild(d);
  if (d.example == "bowen-york") return build_bowen_york(d);
  if (d.example == "conformal-bump") return build_conformal_bump(d);
  if (d.example == "ads-schwarzschild") return build_ads_schwarzschild(d);
  if (d.example == "gauge-perturbation") return build_gauge_perturbation(d);
  if (d.example == "custom-grid") return build_custom_grid(d);
  throw InputError("unknown example: " + d.example);
}

std::string write_grid_from(const InitialDataSet& src, const std::string& stem,
                            const std::array<int, 3>& dims, const Vec& origin,
                            const Vec& spacing) {
  const std::string header_path = stem + ".grid.json";
  const std::string data_name = fs::path(stem).filename().string() + ".grid.bin";
  const std::string data_path =
      (fs::path(stem).parent_path() / data_name).string();
  std::vector<double> values;
  values.reserve(static_cast<size_t>(dims[0]) * dims[1] * dims[2] * 12);
  const int order[6][2] = {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}};
  for (int i = 0; i < dims[0]; ++i)
    for (int j = 0; j < dims[1]; ++j)
      for (int k = 0; k < dims[2]; ++k) {
        Vec x(3);
        x << origin(0) + i * spacing(0), origin(1) + j * spacing(1),
            origin(2) + k * spacing(2);
        const Mat g = src.g.eval(x);
        const Mat h = src.h.eval(x);
        for (int c = 0; c < 6; ++c) values.push_back(g(order[c][0], order[c][1]));
        for (int c = 0; c < 6; ++c) values.push_back(h(order[c][0], order[c][1]));
      }
  std::ofstream bin(data_path, std::ios::binary);
  bin.write(reinterpret_cast<const char*>(values.data()),
            static_cast<std::streamsize>(values.size() * sizeof(double)));
  json j;
  j["dims"] = {dims[0], dims[1], dims[2]};
  j["spacing"] = {spacing(0), spacing(1), spacing(2)};
  j["origin"] = {origin(0), origin(1), origin(2)};
  j["fields"] = {"g", "h"};
  j["data_file"] = data_name;
  std::ofstream out(header_path);
  out << j.dump(2) << "\n";
  return header_path;
}

}  // namespace data
}  // namespace decmass
