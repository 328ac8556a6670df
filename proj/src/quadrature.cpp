#include "decmass/quadrature.hpp"

#include <cmath>

namespace decmass {
namespace mass {

double unit_sphere_area(int n) {
  return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
}

void gauss_legendre(int order, double a, double b, std::vector<double>* x,
                    std::vector<double>* w) {
  // Newton iteration on Legendre polynomials, standard [-1,1] rule mapped
  // to [a,b].
  x->assign(order, 0.0);
  w->assign(order, 0.0);
  const int m = (order + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < order; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = order * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    const double xm = 0.5 * (b + a), xl = 0.5 * (b - a);
    (*x)[i] = xm - xl * z;
    (*x)[order - 1 - i] = xm + xl * z;
    (*w)[i] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
    (*w)[order - 1 - i] = (*w)[i];
  }
}

namespace {

struct UnitRule {
  std::vector<Vec> nodes;       // on S^d in R^{d+1}
  std::vector<double> weights;  // sum = area(S^d)
};

// Recursive product rule on the unit sphere S^d. For even d the polar
// substitution t = cos(theta) gives a polynomial weight (exact with
// Gauss-Legendre); for odd d >= 3 the rule integrates in theta, where the
// integrand is analytic (spectral accuracy).
UnitRule unit_sphere(int d, int order_polar, int order_azimuth,
                     bool hemisphere) {
  UnitRule out;
  if (d == 1) {
    const int m = order_azimuth;
    const double span = hemisphere ? M_PI : 2.0 * M_PI;
    for (int k = 0; k < m; ++k) {
      const double phi = hemisphere ? span * (k + 0.5) / m : span * k / m;
      Vec v(2);
      v << std::cos(phi), std::sin(phi);
      out.nodes.push_back(v);
      out.weights.push_back(span / m);
    }
    return out;
  }
  const UnitRule sub = unit_sphere(d - 1, order_polar, order_azimuth, false);
  std::vector<double> xs, ws;
  if (d % 2 == 0) {
    // t in [lo, 1], weight (1 - t^2)^{(d-2)/2} is a polynomial
    gauss_legendre(order_polar, hemisphere ? 0.0 : -1.0, 1.0, &xs, &ws);
    for (size_t i = 0; i < xs.size(); ++i) {
      const double t = xs[i];
      const double jac = std::pow(1.0 - t * t, 0.5 * (d - 2));
      const double s = std::sqrt(std::max(0.0, 1.0 - t * t));
      for (size_t k = 0; k < sub.nodes.size(); ++k) {
        Vec v(d + 1);
        v.head(d) = s * sub.nodes[k];
        v(d) = t;
        out.nodes.push_back(v);
        out.weights.push_back(ws[i] * jac * sub.weights[k]);
      }
    }
  } else {
    gauss_legendre(order_polar, 0.0, hemisphere ? 0.5 * M_PI : M_PI, &xs, &ws);
    for (size_t i = 0; i < xs.size(); ++i) {
      const double th = xs[i];
      const double t = std::cos(th);
      const double s = std::sin(th);
      const double jac = std::pow(s, d - 1);
      for (size_t k = 0; k < sub.nodes.size(); ++k) {
        Vec v(d + 1);
        v.head(d) = s * sub.nodes[k];
        v(d) = t;
        out.nodes.push_back(v);
        out.weights.push_back(ws[i] * jac * sub.weights[k]);
      }
    }
  }
  return out;
}

}  // namespace

HemisphereRule build_hemisphereRule_impl(const ChartDomain& domain, double r,
                                         int order_polar, int order_azimuth) {
  if (r <= domain.r0)
    throw DomainError("quadrature radius must exceed r0");
  if (order_polar < 2 || order_azimuth < 2)
    throw InputError("quadrature orders must be >= 2");
  const int n = domain.n;
  HemisphereRule rule;
  rule.r = r;
  const UnitRule hemi = unit_sphere(n - 1, order_polar, order_azimuth, true);
  const double rs = std::pow(r, n - 1);
  for (size_t k = 0; k < hemi.nodes.size(); ++k) {
    Vec p = r * hemi.nodes[k];
    if (p(n - 1) < 0 && p(n - 1) > -1e-15) p(n - 1) = 0.0;
    rule.nodes.push_back(p);
    rule.weights.push_back(rs * hemi.weights[k]);
  }
  const UnitRule corner = unit_sphere(n - 2, order_polar, order_azimuth, false);
  const double rc = std::pow(r, n - 2);
  for (size_t k = 0; k < corner.nodes.size(); ++k) {
    Vec p = Vec::Zero(n);
    p.head(n - 1) = r * corner.nodes[k];
    rule.corner_nodes.push_back(p);
    rule.corner_weights.push_back(rc * corner.weights[k]);
  }
  return rule;
}

HemisphereRule build_hemisphere_rule(const ChartDomain& domain, double r,
                                     int order_polar, int order_azimuth) {
  if (domain.model == models::Model::HyperbolicBall)
    throw InputError("quadrature runs in the polar model; convert first");
  return build_hemisphereRule_impl(domain, r, order_polar, order_azimuth);
}

}  // namespace mass
}  // namespace decmass
