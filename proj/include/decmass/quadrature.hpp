#pragma once

#include "decmass/models.hpp"

namespace decmass {
namespace mass {

using models::ChartDomain;

/// Product quadrature on the coordinate hemisphere S^{n-1}_{r,+} (last
/// coordinate >= 0) together with the corner sphere S^{n-2}_r in the
/// boundary plane. Weights carry the g0-area measure; for both reference
/// models the induced metric on coordinate spheres is r^2 h0, so the
/// weights agree with the Euclidean ones.
struct HemisphereRule {
  double r = 1.0;
  std::vector<Vec> nodes;
  std::vector<double> weights;
  std::vector<Vec> corner_nodes;
  std::vector<double> corner_weights;
  double weight_sum() const { return pairwise_sum(weights); }
  double corner_weight_sum() const { return pairwise_sum(corner_weights); }
};

/// Gauss-Legendre nodes/weights on [a,b].
void gauss_legendre(int order, double a, double b, std::vector<double>* x,
                    std::vector<double>* w);

HemisphereRule build_hemisphere_rule(const ChartDomain& domain, double r,
                                     int order_polar, int order_azimuth);

/// Surface area of the unit sphere S^{n-1}.
double unit_sphere_area(int n);

}  // namespace mass
}  // namespace decmass
