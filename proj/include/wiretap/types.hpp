#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace wiretap {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Thrown when an iterative kernel fails to converge or a computation
/// breaks down numerically (singular input, bracket failure, ...).
/// Precondition violations throw std::invalid_argument instead.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tolerance policy shared by all numeric kernels. All comparisons against
/// zero or one go through these knobs so they can be tightened or relaxed
/// in one place.
struct NumericPolicy {
  /// PSD membership: a matrix is accepted as PSD when
  /// min-eig >= -psd_tol_scale * ||A||_2.
  double psd_tol_scale = 1e-10;
  /// Absolute tolerance for eigenvalue-vs-one comparisons (generalized
  /// eigenvalues above one, diagonal entries of D above one).
  double eig_one_tol = 1e-9;
  /// Difference-matrix classification: tol = class_tol_scale * ||A - B||_2.
  double class_tol_scale = 1e-9;
  /// Floor applied to D - I before it is inverted, for rank-deficient
  /// eavesdropper Grams. Entries of D at or below 1 + epsilon_reg are
  /// raised to 1 + epsilon_reg.
  double epsilon_reg = 1e-12;
  /// Power-constraint bisection stops at
  /// |Tr(Q) - P_t| <= trace_tol_scale * max(1, P_t).
  double trace_tol_scale = 1e-10;
  /// Iteration cap for the multiplier bisection.
  int bisection_cap = 200;

  static const NumericPolicy& defaults() {
    static const NumericPolicy policy{};
    return policy;
  }
};

inline bool is_finite(const Matrix& m) {
  return m.allFinite();
}

/// Dense complex diagonal matrix from a real vector, for products with
/// complex matrices (Eigen rejects mixed-scalar diagonal products).
inline Matrix complex_diag(const RealVector& v) {
  Matrix d = Matrix::Zero(v.size(), v.size());
  for (Index i = 0; i < v.size(); ++i) d(i, i) = v[i];
  return d;
}

}  // namespace wiretap
