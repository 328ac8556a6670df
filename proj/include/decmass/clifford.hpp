#pragma once

#include "decmass/fields.hpp"

namespace decmass {
namespace cliff {

// Matrix representation of the complexified Clifford algebra of L^{n,1}:
//   gamma_a gamma_b + gamma_b gamma_a = -2 eta_ab,  eta = diag(-1,+1,...,+1),
// gamma_0 hermitian, gamma_i anti-hermitian for the standard inner product
// <u,v> = v^dagger u of the construction basis; the indefinite pairing is
// (u,v) = <gamma_0 u, v>.

struct CliffordRep {
  int n = 3;
  int N = 4;                  // 2^floor((n+1)/2)
  std::vector<MatC> gamma;    // gamma[0..n]
  double relation_residual = 0.0;
  const MatC& g0() const { return gamma[0]; }
};

CliffordRep build_rep(int n);

enum class ProjectorKind { MitPlus, MitMinus, ChiPlus, ChiMinus };

/// omega = i gamma_n (MIT bag) or Q = gamma_0 gamma_n (chirality).
MatC boundary_involution(const CliffordRep& rep, bool chirality);
/// (I +/- involution)/2.
MatC boundary_projector(const CliffordRep& rep, ProjectorKind kind);
/// Orthonormal basis (columns) of the projector's range, rank N/2.
MatC projector_basis(const CliffordRep& rep, ProjectorKind kind);

struct SpectrumResult {
  MatC matrix;
  Vec eigenvalues;  // ascending
};

/// R = (rho I + J_i gamma_i gamma_0)/2; spectrum (rho +/- |J|)/2.
SpectrumResult operator_R(const CliffordRep& rep, double rho, const Vec& J);
/// U = pi_An gamma_0 gamma_A; spectrum +/- |pi^tangential|.
SpectrumResult operator_U(const CliffordRep& rep, const Vec& pi_tangential);
/// W = (rho_Lambda I + J_i gamma_i gamma_0)/2 (cosmological shift absorbed).
SpectrumResult operator_W(const CliffordRep& rep, double rho_lambda, const Vec& J);

struct TResult {
  MatC matrix;
  Vec eigenvalues;
  double commutator_norm = 0.0;  // ||[T, i gamma_n]||_max
  // simultaneous eigenvectors: columns, one per MIT eigenspace, achieving
  // T phi = +|P| phi with i gamma_n phi = +/- phi
  MatC top_mit_plus, top_mit_minus;
  Vec evals_mit_plus, evals_mit_minus;  // spectrum of T within each eigenspace
};
/// T = P_A gamma_0 gamma_A with P having n-1 components.
TResult operator_T(const CliffordRep& rep, const Vec& P);

/// Max-abs residual of
///   -h_ij gamma_0 gamma_j / 2 + gamma_i (-h_kl gamma_k gamma_0 gamma_l / 2)
///   = -pi_ij gamma_0 gamma_j / 2    for every i,  pi = h - (tr h) I.
double verify_decomposition(const CliffordRep& rep, const Mat& h);

/// Polynomial spinor test field on the flat chart.
struct SpinorField {
  std::function<VecC(const Vec&)> eval;
  std::function<MatC(const Vec&)> jac;  // jac(c,i) = d_i psi^c
};

/// FD residual of Dbar^2 = nabla*nabla + R on a flat background, where
/// Dbar uses nabla_bar_i = d_i - h_ij gamma_0 gamma_j / 2.
double verify_weitzenbock(const CliffordRep& rep, const SymTensorField& h,
                          const SpinorField& psi, const Vec& p, double step);

struct KillingCharge {
  double V = 0.0;
  Vec W;              // components 1..n
  double margin = 0.0;  // V^2 - |W|^2
};
KillingCharge killing_charge(const CliffordRep& rep, const VecC& phi);

struct KtildeResult {
  int d = 0;
  MatC matrix;
  Vec eigenvalues;
  double min_eigenvalue = 0.0;
  bool psd = false;
  double hermiticity_residual = 0.0;
};
/// Hermitian matrix of the mass quadratic form on the chirality eigenspace.
/// mass_values(a, false) = m(V_(a), 0), mass_values(a, true) = m(0, W_(a)).
KtildeResult quadratic_form_Ktilde(
    const CliffordRep& rep,
    const std::function<double(int, bool)>& mass_values, bool chi_plus = true,
    double psd_tol = 1e-11);

/// Charge-coefficient vectors (c_a(phi)) and (d_a(phi)) used by Ktilde.
void killing_charge_coefficients(const CliffordRep& rep, const VecC& phi,
                                 Vec* c, Vec* d);

/// Exact residual of sum_i gamma_i (sign * i/2) gamma_i = -sign * (n i/2) I.
double killing_dirac_shift_check(const CliffordRep& rep, int sign = +1);
/// Wrong-sign control; equals n in exact arithmetic.
double killing_dirac_shift_control(const CliffordRep& rep);

}  // namespace cliff
}  // namespace decmass
