#pragma once

#include "wiretap/types.hpp"

namespace wiretap {

/// Dense complex Hermitian matrix. Construction verifies the input is
/// Hermitian to within 1e-12 * max(1, ||A||_F) and stores the exactly
/// symmetrized value, so downstream code can rely on A == A^H bit-for-bit.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const Matrix& a);

  static HermitianMatrix Zero(Index n);
  static HermitianMatrix Identity(Index n);
  static HermitianMatrix FromDiagonal(const RealVector& d);

  const Matrix& mat() const { return m_; }
  Index dim() const { return m_.rows(); }
  double trace() const { return m_.trace().real(); }
  double frobenius_norm() const { return m_.norm(); }

 private:
  Matrix m_;
};

/// Result of a Hermitian eigendecomposition A = Phi * diag(values) * Phi^H.
/// Eigenvalues are real and sorted descending; Phi is unitary with the
/// phase of each column fixed so its largest-magnitude entry is real
/// positive, which makes the output deterministic and comparable.
struct EigDecomposition {
  Matrix vectors;
  RealVector values;
};

/// Generalized eigendecomposition of a definite Hermitian pencil (A, B):
/// C^H B C = I and C^H A C = diag(values), values sorted descending.
/// count_above_one counts values exceeding 1 + eig_one_tol.
struct Gevd {
  Matrix vectors;
  RealVector values;
  int count_above_one = 0;
};

/// Eigendecomposition of a Hermitian matrix, descending eigenvalue order.
/// Throws NumericalError if the iteration fails to converge.
EigDecomposition hermitian_eig(const HermitianMatrix& a);

/// Unique PSD square root (or inverse square root) of a PSD matrix,
/// computed by eigendecomposition with negative eigenvalues clipped to
/// zero. The inverse root requires strictly positive definite input.
HermitianMatrix psd_sqrt(const HermitianMatrix& a, bool inverse = false,
                         const NumericPolicy& policy = NumericPolicy::defaults());

/// Generalized eigendecomposition of the definite pencil (A, B) with
/// A > 0, B > 0, by whitening with B^{-1/2} followed by a Hermitian
/// eigendecomposition of B^{-1/2} A B^{-1/2}.
Gevd gevd_definite(const HermitianMatrix& a, const HermitianMatrix& b,
                   const NumericPolicy& policy = NumericPolicy::defaults());

/// log-determinant (natural log) of a Hermitian positive definite matrix
/// via the Cholesky factor diagonal.
double logdet_hpd(const HermitianMatrix& a);

}  // namespace wiretap
