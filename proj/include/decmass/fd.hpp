#pragma once

#include "decmass/fields.hpp"

namespace decmass {

// Finite differences on the closed half-space {x_n >= 0}. Central 2nd-order
// stencils; within one step of the boundary the normal-direction stencil
// switches to the one-sided 2nd-order variant. Second derivatives are nested
// first differences on a 5-point cross.

struct FdOptions {
  double step = 0.0;           // 0 -> auto: 1e-4 * max(1, |p|)
  bool halfspace = true;       // domain is {last coordinate >= 0}
  bool use_analytic = true;    // prefer analytic derivative closures
};

double default_step(const Vec& p);
double fd_step(const Vec& p, const FdOptions& opt);

/// First partials of an arbitrary component closure (central / one-sided).
/// F must be finite on the stencil; non-finite values raise EvalError,
/// a stencil leaving the half-space on both sides raises StencilError.
Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& p,
                const FdOptions& opt = {});
double fd_partial(const std::function<double(const Vec&)>& f, const Vec& p,
                  int dir, const FdOptions& opt = {});
/// Nested-first-difference second partial d_i d_j.
double fd_partial2(const std::function<double(const Vec&)>& f, const Vec& p,
                   int i, int j, const FdOptions& opt = {});

/// General multi-index entry point (orders 1 and 2).
/// multi_index = {i} or {i,j}; applies to every component of the field.
Mat fd_derivative(const SymTensorField& T, const Vec& p,
                  const std::vector<int>& multi_index, const FdOptions& opt = {});
double fd_derivative(const ScalarField& f, const Vec& p,
                     const std::vector<int>& multi_index, const FdOptions& opt = {});

// Derivative bundles for tensor fields: analytic closures when present
// (and use_analytic), FD otherwise.
Vec grad_of(const ScalarField& f, const Vec& p, const FdOptions& opt = {});
Mat hess_of(const ScalarField& f, const Vec& p, const FdOptions& opt = {});
Mat jac_of(const VectorField& W, const Vec& p, const FdOptions& opt = {});
Tensor3 hess_of(const VectorField& W, const Vec& p, const FdOptions& opt = {});
Tensor3 deriv_of(const SymTensorField& T, const Vec& p, const FdOptions& opt = {});
Tensor4 deriv2_of(const SymTensorField& T, const Vec& p, const FdOptions& opt = {});

}  // namespace decmass
