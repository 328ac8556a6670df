#include "decmass/clifford.hpp"

#include <cmath>
#include <complex>

#include "decmass/fd.hpp"

namespace decmass {
namespace cliff {

using std::complex;
namespace {

const complex<double> I{0.0, 1.0};

MatC kron(const MatC& a, const MatC& b) {
  MatC out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

CliffordRep build_rep(int n) {
  if (n < 3) throw InputError("build_rep requires n >= 3");
  const int m = n + 1;  // generators of the complex Clifford algebra
  const int q = m / 2;
  const int N = 1 << q;
  MatC s1(2, 2), s2(2, 2), s3(2, 2), id2 = MatC::Identity(2, 2);
  s1 << 0, 1, 1, 0;
  s2 << 0, -I, I, 0;
  s3 << 1, 0, 0, -1;
  // Jordan-Wigner tower: hermitian, involutive, pairwise anticommuting E_k
  std::vector<MatC> E;
  for (int k = 0; k < m; ++k) {
    MatC acc = MatC::Identity(1, 1);
    if (k == m - 1 && m % 2 == 1) {
      for (int j = 0; j < q; ++j) acc = kron(acc, s3);
    } else {
      const int j0 = k / 2;
      for (int j = 0; j < j0; ++j) acc = kron(acc, s3);
      acc = kron(acc, k % 2 == 0 ? s1 : s2);
      for (int j = j0 + 1; j < q; ++j) acc = kron(acc, id2);
    }
    E.push_back(acc);
  }
  CliffordRep rep;
  rep.n = n;
  rep.N = N;
  rep.gamma.resize(m);
  rep.gamma[0] = E[0];
  for (int i = 1; i < m; ++i) rep.gamma[i] = I * E[i];
  // relation residual: gamma_a gamma_b + gamma_b gamma_a = -2 eta_ab
  double res = 0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b <= a; ++b) {
      MatC anti = rep.gamma[a] * rep.gamma[b] + rep.gamma[b] * rep.gamma[a];
      const double eta = (a == 0 && b == 0) ? -1.0 : (a == b ? 1.0 : 0.0);
      anti += 2.0 * eta * MatC::Identity(N, N);
      res = std::max(res, anti.cwiseAbs().maxCoeff());
    }
  rep.relation_residual = res;
  return rep;
}

MatC boundary_involution(const CliffordRep& rep, bool chirality) {
  if (chirality) return rep.gamma[0] * rep.gamma[rep.n];
  return I * rep.gamma[rep.n];
}

MatC boundary_projector(const CliffordRep& rep, ProjectorKind kind) {
  const bool chi =
      kind == ProjectorKind::ChiPlus || kind == ProjectorKind::ChiMinus;
  const double sign =
      (kind == ProjectorKind::MitPlus || kind == ProjectorKind::ChiPlus) ? 1.0
                                                                         : -1.0;
  const MatC inv = boundary_involution(rep, chi);
  return 0.5 * (MatC::Identity(rep.N, rep.N) + sign * inv);
}

MatC projector_basis(const CliffordRep& rep, ProjectorKind kind) {
  const bool chi =
      kind == ProjectorKind::ChiPlus || kind == ProjectorKind::ChiMinus;
  const double sign =
      (kind == ProjectorKind::MitPlus || kind == ProjectorKind::ChiPlus) ? 1.0
                                                                         : -1.0;
  const MatC inv = boundary_involution(rep, chi);
  Eigen::SelfAdjointEigenSolver<MatC> es(inv);
  MatC basis(rep.N, rep.N / 2);
  int col = 0;
  for (int i = 0; i < rep.N; ++i) {
    if (sign * es.eigenvalues()(i) > 0.5) {
      if (col >= rep.N / 2) throw Error("projector rank exceeds N/2");
      basis.col(col++) = es.eigenvectors().col(i);
    }
  }
  if (col != rep.N / 2) throw Error("projector rank below N/2");
  return basis;
}

namespace {

SpectrumResult hermitian_spectrum(MatC M) {
  SpectrumResult out;
  out.matrix = M;
  Eigen::SelfAdjointEigenSolver<MatC> es(M);
  out.eigenvalues = es.eigenvalues();
  return out;
}

}  // namespace

SpectrumResult operator_R(const CliffordRep& rep, double rho, const Vec& J) {
  MatC M = 0.5 * rho * MatC::Identity(rep.N, rep.N);
  for (int i = 1; i <= rep.n; ++i)
    M += 0.5 * J(i - 1) * (rep.gamma[i] * rep.gamma[0]);
  return hermitian_spectrum(M);
}

SpectrumResult operator_U(const CliffordRep& rep, const Vec& pi_tangential) {
  MatC M = MatC::Zero(rep.N, rep.N);
  for (int A = 1; A <= rep.n - 1; ++A)
    M += pi_tangential(A - 1) * (rep.gamma[0] * rep.gamma[A]);
  return hermitian_spectrum(M);
}

SpectrumResult operator_W(const CliffordRep& rep, double rho_lambda,
                          const Vec& J) {
  return operator_R(rep, rho_lambda, J);
}

TResult operator_T(const CliffordRep& rep, const Vec& P) {
  TResult out;
  MatC M = MatC::Zero(rep.N, rep.N);
  for (int A = 1; A <= rep.n - 1; ++A)
    M += P(A - 1) * (rep.gamma[0] * rep.gamma[A]);
  out.matrix = M;
  Eigen::SelfAdjointEigenSolver<MatC> es(M);
  out.eigenvalues = es.eigenvalues();
  const MatC omega = boundary_involution(rep, false);
  out.commutator_norm = (M * omega - omega * M).cwiseAbs().maxCoeff();
  for (int s = 0; s < 2; ++s) {
    const ProjectorKind kind =
        s == 0 ? ProjectorKind::MitPlus : ProjectorKind::MitMinus;
    const MatC Q = projector_basis(rep, kind);
    Eigen::SelfAdjointEigenSolver<MatC> sub(Q.adjoint() * M * Q);
    const MatC vecs = Q * sub.eigenvectors();
    if (s == 0) {
      out.evals_mit_plus = sub.eigenvalues();
      out.top_mit_plus = vecs.col(vecs.cols() - 1);
    } else {
      out.evals_mit_minus = sub.eigenvalues();
      out.top_mit_minus = vecs.col(vecs.cols() - 1);
    }
  }
  return out;
}

double verify_decomposition(const CliffordRep& rep, const Mat& h) {
  const int n = rep.n;
  if ((h - h.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw InputError("verify_decomposition requires symmetric h");
  const Mat pi = h - h.trace() * Mat::Identity(n, n);
  // bulk term of e_i . Dbar: -(1/2) h_kl gamma_k gamma_0 gamma_l
  MatC dbar = MatC::Zero(rep.N, rep.N);
  for (int k = 1; k <= n; ++k)
    for (int l = 1; l <= n; ++l)
      dbar -= 0.5 * h(k - 1, l - 1) *
              (rep.gamma[k] * rep.gamma[0] * rep.gamma[l]);
  double res = 0;
  for (int i = 1; i <= n; ++i) {
    MatC lhs = rep.gamma[i] * dbar;
    MatC rhs = MatC::Zero(rep.N, rep.N);
    for (int j = 1; j <= n; ++j) {
      lhs -= 0.5 * h(i - 1, j - 1) * (rep.gamma[0] * rep.gamma[j]);
      rhs -= 0.5 * pi(i - 1, j - 1) * (rep.gamma[0] * rep.gamma[j]);
    }
    res = std::max(res, (lhs - rhs).cwiseAbs().maxCoeff());
  }
  return res;
}

namespace {

// central FD of a complex spinor closure
VecC fd_partial_spinor(const std::function<VecC(const Vec&)>& f, const Vec& p,
                       int dir, double h) {
  Vec e = Vec::Zero(p.size());
  e(dir) = 1.0;
  return (f(p + h * e) - f(p - h * e)) / (2.0 * h);
}

}  // namespace

double verify_weitzenbock(const CliffordRep& rep, const SymTensorField& h,
                          const SpinorField& psi, const Vec& p, double step) {
  const int n = rep.n;
  const int N = rep.N;
  // nabla_bar_i psi, exact in psi and h values
  auto nabla = [&](const Vec& q, int i) {
    const Mat hm = h.eval(q);
    VecC out = psi.jac(q).col(i - 1);
    for (int j = 1; j <= n; ++j)
      out -= 0.5 * hm(i - 1, j - 1) * (rep.gamma[0] * (rep.gamma[j] * psi.eval(q)));
    return out;
  };
  auto dbar = [&](const Vec& q) {
    VecC out = VecC::Zero(N);
    for (int i = 1; i <= n; ++i) out += rep.gamma[i] * nabla(q, i);
    return out;
  };
  // Dbar^2 via one FD level on the Dbar closure
  const Mat hm = h.eval(p);
  VecC dbar2 = VecC::Zero(N);
  for (int i = 1; i <= n; ++i) {
    VecC d_i = fd_partial_spinor(dbar, p, i - 1, step);
    VecC cov = d_i;
    for (int j = 1; j <= n; ++j)
      cov -= 0.5 * hm(i - 1, j - 1) * (rep.gamma[0] * (rep.gamma[j] * dbar(p)));
    dbar2 += rep.gamma[i] * cov;
  }
  // nabla*nabla = sum_i (-d_i + h_ij gamma_0 gamma_j/2 + h_ij gamma_j gamma_0)
  //               applied to nabla_i psi
  VecC bochner = VecC::Zero(N);
  for (int i = 1; i <= n; ++i) {
    auto chi = [&](const Vec& q) { return nabla(q, i); };
    VecC dchi = fd_partial_spinor(chi, p, i - 1, step);
    VecC val = -dchi;
    const VecC chim = nabla(p, i);
    for (int j = 1; j <= n; ++j) {
      val += 0.5 * hm(i - 1, j - 1) * (rep.gamma[0] * (rep.gamma[j] * chim));
      val += hm(i - 1, j - 1) * (rep.gamma[j] * (rep.gamma[0] * chim));
    }
    bochner += val;
  }
  // curvature endomorphism from (delta, h)
  const Tensor3 dh = deriv_of(h, p);
  const double trh = hm.trace();
  double dtr;
  Vec J(n);
  for (int j = 0; j < n; ++j) {
    double s = 0;
    dtr = 0;
    for (int i = 0; i < n; ++i) {
      s += dh(i, i, j);
      dtr += dh(j, i, i);
    }
    J(j) = s - dtr;
  }
  const double rho = 0.5 * (-(hm * hm).trace() + trh * trh);
  VecC rterm = 0.5 * rho * psi.eval(p);
  for (int i = 1; i <= n; ++i)
    rterm += 0.5 * J(i - 1) * (rep.gamma[i] * (rep.gamma[0] * psi.eval(p)));
  return (dbar2 - bochner - rterm).cwiseAbs().maxCoeff();
}

KillingCharge killing_charge(const CliffordRep& rep, const VecC& phi) {
  KillingCharge out;
  out.V = phi.squaredNorm();
  out.W = Vec(rep.n);
  for (int i = 1; i <= rep.n; ++i)
    out.W(i - 1) = (phi.adjoint() * (rep.gamma[0] * (rep.gamma[i] * phi)))(0).real();
  out.margin = out.V * out.V - out.W.squaredNorm();
  return out;
}

void killing_charge_coefficients(const CliffordRep& rep, const VecC& phi,
                                 Vec* c, Vec* d) {
  const int n = rep.n;
  c->resize(n);
  d->resize(n);
  auto quad = [&](const MatC& M) {
    return (phi.adjoint() * (M * phi))(0).real();
  };
  (*c)(0) = quad(MatC::Identity(rep.N, rep.N));
  (*d)(0) = quad(rep.gamma[0] * rep.gamma[n]);
  for (int A = 1; A <= n - 1; ++A) {
    (*c)(A) = quad(I * rep.gamma[A]);
    (*d)(A) = quad(I * rep.gamma[0] * rep.gamma[A] * rep.gamma[n]);
  }
}

KtildeResult quadratic_form_Ktilde(
    const CliffordRep& rep,
    const std::function<double(int, bool)>& mass_values, bool chi_plus,
    double psd_tol) {
  const int n = rep.n;
  const int d = rep.N / 2;
  const MatC Q = projector_basis(
      rep, chi_plus ? ProjectorKind::ChiPlus : ProjectorKind::ChiMinus);
  std::vector<MatC> C(n), D(n);
  C[0] = MatC::Identity(rep.N, rep.N);
  D[0] = rep.gamma[0] * rep.gamma[n];
  for (int A = 1; A <= n - 1; ++A) {
    C[A] = I * rep.gamma[A];
    D[A] = I * rep.gamma[0] * rep.gamma[A] * rep.gamma[n];
  }
  MatC K = MatC::Zero(d, d);
  for (int a = 0; a < n; ++a) {
    K += mass_values(a, false) * (Q.adjoint() * C[a] * Q);
    K += mass_values(a, true) * (Q.adjoint() * D[a] * Q);
  }
  KtildeResult out;
  out.d = d;
  out.matrix = K;
  out.hermiticity_residual = (K - K.adjoint()).cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<MatC> es(K);
  out.eigenvalues = es.eigenvalues();
  out.min_eigenvalue = out.eigenvalues.minCoeff();
  out.psd = out.min_eigenvalue >= -psd_tol;
  return out;
}

double killing_dirac_shift_check(const CliffordRep& rep, int sign) {
  MatC lhs = MatC::Zero(rep.N, rep.N);
  for (int i = 1; i <= rep.n; ++i)
    lhs += rep.gamma[i] * (complex<double>(sign) * 0.5 * I * rep.gamma[i]);
  const MatC rhs =
      -complex<double>(sign) * 0.5 * static_cast<double>(rep.n) * I *
      MatC::Identity(rep.N, rep.N);
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

double killing_dirac_shift_control(const CliffordRep& rep) {
  MatC lhs = MatC::Zero(rep.N, rep.N);
  for (int i = 1; i <= rep.n; ++i) lhs += rep.gamma[i] * (0.5 * I * rep.gamma[i]);
  const MatC wrong =
      0.5 * static_cast<double>(rep.n) * I * MatC::Identity(rep.N, rep.N);
  return (lhs - wrong).cwiseAbs().maxCoeff();
}

}  // namespace cliff
}  // namespace decmass
