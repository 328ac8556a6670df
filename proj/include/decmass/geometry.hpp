#pragma once

#include "decmass/fd.hpp"

namespace decmass {
namespace geom {

// Conventions:
//   Gamma^k_ij = (1/2) g^{kl} (d_i g_jl + d_j g_il - d_l g_ij)
//   R^l_{kij}  = d_i Gamma^l_jk - d_j Gamma^l_ik
//                + Gamma^l_im Gamma^m_jk - Gamma^l_jm Gamma^m_ik
//   R_{lkij}   = g_{lm} R^m_{kij},  Ric_kj = R^i_{kij},  R = g^{kj} Ric_kj
// so that the hyperbolic reference metric has R = -n(n-1).

struct CurvatureBundle {
  Mat g;
  Mat g_inv;
  Tensor3 christoffel;  // Gamma(k,i,j) = Gamma^k_ij
  Tensor4 riemann;      // R(l,k,i,j) = R_{lkij} (all indices down)
  Mat ricci;
  double scalar = 0.0;
  double symmetry_residual = 0.0;  // max violation of pair/antisym identities
  double bianchi_residual = 0.0;   // max first-Bianchi violation
};

/// Pure index algebra: (nabla_i T)_{jk} from raw partials dT(i,j,k) = d_i T_jk.
Tensor3 covariant_deriv_sym(const Tensor3& dT, const Mat& T, const Tensor3& Gamma);
/// (nabla_i xi)_j from raw partials dxi(i,j) = d_i xi_j.
Mat covariant_deriv_covector(const Mat& dxi, const Vec& xi, const Tensor3& Gamma);

/// Pointwise metric algebra: inverse with singularity guard.
Mat inverse_metric(const Mat& g);

/// Christoffel symbols from metric value and first-derivative array.
Tensor3 christoffel(const Mat& g_inv, const Tensor3& dg);

CurvatureBundle curvature(const SymTensorField& g, const Vec& p,
                          const FdOptions& opt = {});

/// g-orthonormal frame at a point, columns are the frame vectors.
/// Gram-Schmidt over the coordinate basis; if `normal` is given it becomes
/// the last frame vector and the rest are orthonormalized against it.
Mat orthonormal_frame(const Mat& g, const Vec* normal = nullptr);

struct BoundaryGeometry {
  Vec normal;        // inward unit normal, coordinate components
  Mat induced;       // gamma_AB, A,B = 0..n-2 (coordinate tangent directions)
  Mat second_fund;   // b_AB = <nabla_{e_A} rho, e_B>, coordinate tangents
  double mean_curv;  // H_g = tr_gamma b
};

/// Geometry of the boundary {x_n = 0} at a boundary point.
BoundaryGeometry boundary_geometry(const SymTensorField& g, const Vec& p,
                                   const FdOptions& opt = {});

struct EinsteinNewton {
  Mat einstein;  // G_ij = Ric_ij - (R/2) g_ij, coordinate components
  Mat newton;    // N_AB = H_g gamma_AB - b_AB, boundary points only (else 0x0)
};

EinsteinNewton einstein_and_newton(const SymTensorField& g, const Vec& p,
                                   const FdOptions& opt = {},
                                   bool boundary_data = false);

struct KillingDevReport {
  bool refused = false;            // generator precondition violated
  double eq_vw_residual = 0.0;     // max |L_W g - 2 V h|
  double eq_vw_diff_residual = 0.0;  // |d(V^2 - |W|^2)|
  // the curvature formulas come from the parallel-spinor identities
  // nabla_i W_j = V h_ij, whose antisymmetric part must vanish as well
  double eq_vw_asym_residual = 0.0;  // max |(nabla W_flat)_[ij]|
  double res_gauss = 0.0;    // Rt_ijkt - (R_ijkt + h_ik h_jt - h_it h_jk)
  double res_codazzi = 0.0;  // Rt_ijk0 - (h_kj,i - h_ki,j)
  double res_mixed = 0.0;    // Rt_i0k0 - (h_it,k - h_ik,t) W^t / V
};

/// Curvature check of the Lorentzian development metric
///   gt = -V^2 du^2 + sum_i (theta^i - W^i du) (x) (theta^i - W^i du)
/// on the (n+1)-dimensional product chart, frame components taken in
/// (e0t = (1/V)(d_u + W), e_i) with {e_i} g-orthonormal.
KillingDevReport killing_development_check(const SymTensorField& g,
                                           const SymTensorField& h,
                                           const ScalarField& V,
                                           const VectorField& W, const Vec& p,
                                           const FdOptions& opt = {},
                                           double precondition_tol = 1e-6);

}  // namespace geom
}  // namespace decmass
