#pragma once

#include <optional>

#include "decmass/geometry.hpp"

namespace decmass {
namespace models {

enum class Model { Flat, HyperbolicPolar, HyperbolicBall };

std::string model_name(Model m);
Model model_from_name(const std::string& s);

struct ChartDomain {
  int n = 3;
  Model model = Model::Flat;
  double r0 = 1.0;
  bool hyperbolic() const { return model != Model::Flat; }
  /// Cosmological constant matching the model: 0 or -n(n-1)/2.
  double matching_lambda() const {
    return hyperbolic() ? -0.5 * n * (n - 1) : 0.0;
  }
  void validate() const {
    if (n < 3) throw InputError("dimension must satisfy n >= 3");
    if (r0 <= 0) throw InputError("r0 must be positive");
  }
  bool contains(const Vec& p) const { return p(p.size() - 1) >= -1e-14; }
};

/// Initial data set (g, h) over a half-space chart.
struct InitialDataSet {
  ChartDomain domain;
  SymTensorField g;
  SymTensorField h;
  /// Optional exact closure for f = g - g0. When present the flux code uses
  /// it directly; forming g - g0 by subtraction loses precision once |f|
  /// drops toward machine epsilon times |g0|.
  SymTensorField deviation;
  double decay_exponent = 1.0;  // tau (flat) or kappa (hyperbolic)
  double lambda = 0.0;          // 0 or -n(n-1)/2
  std::string name = "custom";
  bool has_deviation() const { return static_cast<bool>(deviation.eval); }
};

/// Reference metric g0 with exact analytic derivative closures.
SymTensorField reference_metric(const ChartDomain& domain);

struct StaticPotential {
  int index = 0;
  ScalarField field;
};
/// Flat: the single constant potential. Hyperbolic: V_(a), a = 0..n-1, in the
/// domain's coordinate model.
std::vector<StaticPotential> static_potentials(const ChartDomain& domain);

struct KillingBasisElement {
  int index = 0;
  VectorField field;
};
/// Flat: boundary-tangent translations d_{x_A}, A = 1..n-1.
/// Hyperbolic: L_{an}, a = 0..n-1, boundary-orthogonal with
/// W_(a)|_boundary = V_(a) e_n.
std::vector<KillingBasisElement> killing_basis(const ChartDomain& domain);

// ---------------------------------------------------------------- isometries

/// Boundary-preserving model isometry in chart coordinates. Flat charts:
/// x -> R x + t with R fixing e_n and t tangent to the boundary. Hyperbolic
/// charts: O(n,1) matrices fixing the hyperboloid plane {x_n = 0}, acting on
/// the polar chart through the hyperboloid embedding.
struct Isometry {
  int n = 3;
  Model model = Model::Flat;
  std::function<Vec(const Vec&)> apply;
  std::function<Mat(const Vec&)> jac;       // J(i,j) = d_j Phi^i
  std::function<Tensor3(const Vec&)> hess;  // H(a,i,j) = d_i d_j Phi^a
  std::function<Tensor4(const Vec&)> d3;    // K(a,i,j,k) = d_i d_j d_k Phi^a
  /// Matrix of the induced action on the static-potential basis {V_(a)}
  /// (flat: 1x1 identity on the constant; the Killing block acts on P).
  Mat basis_action;   // hyperbolic: n x n on a = 0..n-1; flat: (n-1)x(n-1) on P
};

Isometry identity_isometry(const ChartDomain& domain);
/// Rotation by `angle` in the (i,j) coordinate plane, 0-based, i,j < n-1,
/// fixing the x_n axis; flat model.
Isometry flat_rotation(const ChartDomain& domain, int i, int j, double angle);
Isometry flat_translation(const ChartDomain& domain, const Vec& t);
/// Hyperbolic boost of rapidity `alpha` in the (x_0, x_{1+axis}) hyperboloid
/// plane (axis < n-1), fixing {x_n = 0}; polar model.
Isometry hyperbolic_boost(const ChartDomain& domain, int axis, double alpha);
/// Hyperbolic rotation in the (x_i, x_j) plane, 1 <= i < j <= n-1.
Isometry hyperbolic_rotation(const ChartDomain& domain, int i, int j, double angle);

/// Pull-back A*g of a symmetric 2-tensor field (derivatives propagated).
SymTensorField pullback_sym_tensor(const SymTensorField& T, const Isometry& A);

/// Pulled-back initial data set (A*g, A*h); throws InvalidIsometryError when
/// a sampled boundary point leaves the boundary.
InitialDataSet isometry_apply(const Isometry& A, const InitialDataSet& data);

// --------------------------------------------------------------- Lorentzian

enum class CausalClass {
  Zero,
  TimelikeFuture,
  TimelikePast,
  NullFuture,
  NullPast,
  Spacelike,
};

std::string causal_class_name(CausalClass c);

/// <<z,w>> = z_0 w_0 - z_1 w_1 - ... (index 0 timelike).
double lorentz_inner(const Vec& z, const Vec& w);

/// Classification by sign of <<v,v>> and v_0 with relative tolerance band
/// |<<v,v>>| <= eps |v|^2 reported as null.
CausalClass causal_classify(const Vec& v, double eps = 1e-12);

// --------------------------------------------- coordinate model change maps

/// Poincare half-ball coordinates from polar (hyperboloid spatial) ones.
Vec polar_to_ball(const Vec& y);
Vec ball_to_polar(const Vec& z);

}  // namespace models
}  // namespace decmass
