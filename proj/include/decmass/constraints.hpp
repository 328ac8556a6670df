#pragma once

#include "decmass/models.hpp"

namespace decmass {
namespace constraints {

using models::ChartDomain;
using models::InitialDataSet;

/// pi = h - (tr_g h) g, pointwise.
Mat conjugate_momentum(const Mat& g, const Mat& h);

/// Exact model geometry at a point: g0, its inverse, Christoffels and Ricci.
struct ModelGeometry {
  Mat g0;
  Mat g0_inv;
  Tensor3 gamma;
  Mat ricci;
};
ModelGeometry model_geometry(const ChartDomain& domain, const Vec& p);

struct InteriorValues {
  double rho = 0.0;
  Vec J;           // covector, coordinate components
  double J_norm = 0.0;  // |J|_g
};
/// rho_Lambda = (R_g - 2 Lambda - |h|^2 + (tr h)^2)/2, J = div_g h - d tr_g h.
InteriorValues interior_constraints(const InitialDataSet& data, const Vec& p,
                                    const FdOptions& opt = {});

struct BoundaryValues {
  double H = 0.0;        // mean curvature of the boundary in g
  Vec pi_tangential;     // (rho .| pi)^tangential, adapted orthonormal frame
  double pi_normal = 0.0;  // pi_nn
};
BoundaryValues boundary_constraints(const InitialDataSet& data, const Vec& p,
                                    const FdOptions& opt = {});

struct DecReport {
  double tol = 1e-9;
  double interior_worst = 0.0;
  double tangential_worst = 0.0;
  double normal_worst = 0.0;
  Vec interior_worst_point, tangential_worst_point, normal_worst_point;
  bool interior_pass = true, tangential_pass = true, normal_pass = true;
  int interior_samples = 0, boundary_samples = 0;
  bool pass() const { return interior_pass && tangential_pass && normal_pass; }
};
/// Sampled DEC margins. Points are visited in lexicographic order; the first
/// minimum wins, so reports are deterministic.
DecReport check_dec(const InitialDataSet& data, std::vector<Vec> interior_pts,
                    std::vector<Vec> boundary_pts, double tol = 1e-9,
                    const FdOptions& opt = {});

/// Tensor-product sample grid in a coordinate box, clipped to the half space
/// and to {|p| >= r0}; plus the matching boundary grid.
void box_samples(const ChartDomain& domain, const Vec& lo, const Vec& hi,
                 int per_axis, std::vector<Vec>* interior,
                 std::vector<Vec>* boundary);

struct LinearizedValues {
  double dpsi_scalar = 0.0;
  Vec dpsi_covector;  // 2 (div_0 h - d tr_0 h)
  double dphi_scalar = 0.0;  // boundary points only
  Vec dphi_covector;         // 2 rho .| (h - (tr_0 h) g0)
};
/// Linearized constraint maps at (g0, 0). The boundary components are filled
/// only when p lies on the boundary.
LinearizedValues linearized_constraints(const ChartDomain& domain,
                                        const SymTensorField& f,
                                        const SymTensorField& h, const Vec& p,
                                        const FdOptions& opt = {});

/// Charge density U_(f,h)(V,W) at p (covector, coordinate components).
Vec charge_density(const ChartDomain& domain, const SymTensorField& f,
                   const SymTensorField& h, const ScalarField& V,
                   const VectorField& W, const Vec& p,
                   const FdOptions& opt = {});

/// Formal adjoint F(V,W) = (Hess V - (Lap V) g0 - V Ric0,
///                          -L_W g0 + 2 (div_0 W) g0).
std::pair<Mat, Mat> adjoint_constraint(const ChartDomain& domain,
                                       const ScalarField& V,
                                       const VectorField& W, const Vec& p,
                                       const FdOptions& opt = {});

/// Residual of <DPsi(f,h),(V,W)> = div U + <(f,h), F(V,W)> at p.
double verify_divergence_identity(const ChartDomain& domain,
                                  const SymTensorField& f,
                                  const SymTensorField& h,
                                  const ScalarField& V, const VectorField& W,
                                  const Vec& p, const FdOptions& opt = {});

/// Residual of U_(L_zeta b, 0)(V,W) = div_b V~ (hyperbolic models only),
/// V~_ik = V (zeta_i;k - zeta_k;i) + 2 (zeta_k V_i - zeta_i V_k).
double verify_gauge_charge(const ChartDomain& domain, const VectorField& zeta,
                           const ScalarField& V, const VectorField& W,
                           const Vec& p, const FdOptions& opt = {});

/// L_zeta g0 as a field with analytic first derivatives.
SymTensorField lie_derivative_metric(const ChartDomain& domain,
                                     const VectorField& zeta);

/// Interior integrand V rho + <W,J>, or boundary integrand
/// V H_g + <W, rho .| pi> when `boundary` is set.
double hamiltonian_density(const InitialDataSet& data, const ScalarField& V,
                           const VectorField& W, const Vec& p, bool boundary,
                           const FdOptions& opt = {});

struct DecayAuditRow {
  double r = 0.0;
  double f0 = 0.0, f1 = 0.0, f2 = 0.0;  // weighted sups of f and derivatives
  double h0 = 0.0, h1 = 0.0;            // weighted sups of h and derivative
  double shell_interior = 0.0;  // shell integral of |Psi| (weighted if hyp)
  double shell_boundary = 0.0;  // ring integral of |Phi| (weighted if hyp)
};
struct DecayAudit {
  std::vector<DecayAuditRow> rows;
  bool sup_pass = true;       // weighted sups do not grow along the tail
  bool integral_pass = true;  // shell contributions decrease along the tail
  bool pass() const { return sup_pass && integral_pass; }
};
DecayAudit decay_audit(const InitialDataSet& data, const std::vector<double>& radii,
                       const FdOptions& opt = {});

}  // namespace constraints
}  // namespace decmass
