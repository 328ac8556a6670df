#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace decmass {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using VecC = Eigen::VectorXcd;
using MatC = Eigen::MatrixXcd;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct StencilError : Error { using Error::Error; };
struct EvalError : Error { using Error::Error; };
struct SingularMetricError : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct DegenerateLapseError : Error { using Error::Error; };
struct InvalidIsometryError : Error { using Error::Error; };
struct InvalidGaugeError : Error { using Error::Error; };
struct InputError : Error { using Error::Error; };
struct ConvergenceError : Error { using Error::Error; };

/// Dense rank-3 array, T(i,j,k), all extents equal to n.
class Tensor3 {
 public:
  Tensor3() : n_(0) {}
  explicit Tensor3(int n) : n_(n), v_(static_cast<size_t>(n) * n * n, 0.0) {}
  double& operator()(int i, int j, int k) { return v_[idx(i, j, k)]; }
  double operator()(int i, int j, int k) const { return v_[idx(i, j, k)]; }
  int dim() const { return n_; }
  double max_abs() const {
    double m = 0;
    for (double x : v_) m = std::max(m, std::abs(x));
    return m;
  }

 private:
  size_t idx(int i, int j, int k) const {
    return (static_cast<size_t>(i) * n_ + j) * n_ + k;
  }
  int n_;
  std::vector<double> v_;
};

/// Dense rank-4 array, T(i,j,k,l), all extents equal to n.
class Tensor4 {
 public:
  Tensor4() : n_(0) {}
  explicit Tensor4(int n) : n_(n), v_(static_cast<size_t>(n) * n * n * n, 0.0) {}
  double& operator()(int i, int j, int k, int l) { return v_[idx(i, j, k, l)]; }
  double operator()(int i, int j, int k, int l) const { return v_[idx(i, j, k, l)]; }
  int dim() const { return n_; }
  double max_abs() const {
    double m = 0;
    for (double x : v_) m = std::max(m, std::abs(x));
    return m;
  }

 private:
  size_t idx(int i, int j, int k, int l) const {
    return ((static_cast<size_t>(i) * n_ + j) * n_ + k) * n_ + l;
  }
  int n_;
  std::vector<double> v_;
};

/// Deterministic splitmix64-based RNG. Used instead of <random> distributions
/// so that seeded reports are byte-identical across platforms.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}
  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  /// Uniform in [0,1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  /// Uniform in [a,b).
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

 private:
  uint64_t state_;
};

/// Fixed-order pairwise summation; reduction tree depends only on the length.
double pairwise_sum(const std::vector<double>& v);

}  // namespace decmass
