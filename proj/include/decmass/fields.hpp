#pragma once

#include <functional>

#include "decmass/types.hpp"

namespace decmass {

// Evaluation-map field handles. A field is a pure closure point -> components,
// optionally carrying analytic derivative closures. Derivative layouts:
//   scalar:  grad(i) = d_i f,        hess(i,j)   = d_i d_j f
//   vector:  jac(i,j) = d_j W^i,     hess(k,i,j) = d_i d_j W^k
//   sym 2-tensor: deriv(k,i,j) = d_k T_ij,  deriv2(k,l,i,j) = d_k d_l T_ij

struct ScalarField {
  std::function<double(const Vec&)> eval;
  std::function<Vec(const Vec&)> grad;
  std::function<Mat(const Vec&)> hess;
  bool has_grad() const { return static_cast<bool>(grad); }
  bool has_hess() const { return static_cast<bool>(hess); }
};

struct VectorField {
  std::function<Vec(const Vec&)> eval;
  std::function<Mat(const Vec&)> jac;
  std::function<Tensor3(const Vec&)> hess;
  bool has_jac() const { return static_cast<bool>(jac); }
  bool has_hess() const { return static_cast<bool>(hess); }
};

struct SymTensorField {
  std::function<Mat(const Vec&)> eval;
  std::function<Tensor3(const Vec&)> deriv;
  std::function<Tensor4(const Vec&)> deriv2;
  bool has_deriv() const { return static_cast<bool>(deriv); }
  bool has_deriv2() const { return static_cast<bool>(deriv2); }
};

inline ScalarField constant_scalar(double c) {
  return {[c](const Vec&) { return c; },
          [](const Vec& p) { return Vec::Zero(p.size()).eval(); },
          [](const Vec& p) { return Mat::Zero(p.size(), p.size()).eval(); }};
}

inline VectorField zero_vector_field() {
  return {[](const Vec& p) { return Vec::Zero(p.size()).eval(); },
          [](const Vec& p) { return Mat::Zero(p.size(), p.size()).eval(); },
          [](const Vec& p) { return Tensor3(static_cast<int>(p.size())); }};
}

inline VectorField constant_vector_field(const Vec& w) {
  return {[w](const Vec&) { return w; },
          [](const Vec& p) { return Mat::Zero(p.size(), p.size()).eval(); },
          [](const Vec& p) { return Tensor3(static_cast<int>(p.size())); }};
}

inline SymTensorField zero_sym_tensor_field() {
  return {[](const Vec& p) { return Mat::Zero(p.size(), p.size()).eval(); },
          [](const Vec& p) { return Tensor3(static_cast<int>(p.size())); },
          [](const Vec& p) { return Tensor4(static_cast<int>(p.size())); }};
}

/// Pointwise sum g0 + f of two symmetric tensor fields, derivative closures
/// propagated when both operands carry them.
SymTensorField add_fields(const SymTensorField& a, const SymTensorField& b);

}  // namespace decmass
