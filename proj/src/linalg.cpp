#include "wiretap/linalg.hpp"

#include <cmath>

namespace wiretap {

namespace {

// Canonical phase: rotate each column so its largest-magnitude entry is
// real positive. Ties resolve to the lowest index.
void fix_column_phases(Matrix& v) {
  for (Index j = 0; j < v.cols(); ++j) {
    Index imax = 0;
    double best = -1.0;
    for (Index i = 0; i < v.rows(); ++i) {
      const double a = std::abs(v(i, j));
      if (a > best) {
        best = a;
        imax = i;
      }
    }
    if (best > 0.0) {
      const Complex phase = std::conj(v(imax, j)) / best;
      v.col(j) *= phase;
    }
  }
}

}  // namespace

HermitianMatrix::HermitianMatrix(const Matrix& a) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw std::invalid_argument("HermitianMatrix: input must be square and non-empty");
  }
  if (!is_finite(a)) {
    throw std::invalid_argument("HermitianMatrix: input has non-finite entries");
  }
  const double asym = (a - a.adjoint()).norm();
  if (asym > 1e-12 * std::max(1.0, a.norm())) {
    throw std::invalid_argument("HermitianMatrix: input is not Hermitian within tolerance");
  }
  m_ = 0.5 * (a + a.adjoint());
}

HermitianMatrix HermitianMatrix::Zero(Index n) {
  return HermitianMatrix(Matrix::Zero(n, n));
}

HermitianMatrix HermitianMatrix::Identity(Index n) {
  return HermitianMatrix(Matrix::Identity(n, n));
}

HermitianMatrix HermitianMatrix::FromDiagonal(const RealVector& d) {
  Matrix m = Matrix::Zero(d.size(), d.size());
  for (Index i = 0; i < d.size(); ++i) m(i, i) = Complex(d[i], 0.0);
  return HermitianMatrix(m);
}

EigDecomposition hermitian_eig(const HermitianMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.mat());
  if (es.info() != Eigen::Success) {
    throw NumericalError("hermitian_eig: eigensolver failed to converge");
  }
  const Index n = a.dim();
  EigDecomposition out;
  out.values = es.eigenvalues().reverse();
  out.vectors = Matrix(n, n);
  for (Index j = 0; j < n; ++j) out.vectors.col(j) = es.eigenvectors().col(n - 1 - j);
  fix_column_phases(out.vectors);
  return out;
}

HermitianMatrix psd_sqrt(const HermitianMatrix& a, bool inverse,
                         const NumericPolicy& policy) {
  EigDecomposition eig = hermitian_eig(a);
  const double scale = eig.values.cwiseAbs().maxCoeff();
  const double tau = policy.psd_tol_scale * scale;
  if (eig.values.minCoeff() < -tau) {
    throw std::invalid_argument("psd_sqrt: input is not positive semidefinite");
  }
  if (inverse && eig.values.minCoeff() <= tau) {
    throw NumericalError("psd_sqrt: inverse square root of a singular matrix");
  }
  RealVector roots(eig.values.size());
  for (Index i = 0; i < eig.values.size(); ++i) {
    const double v = std::max(eig.values[i], 0.0);
    roots[i] = inverse ? 1.0 / std::sqrt(v) : std::sqrt(v);
  }
  Matrix s = eig.vectors * complex_diag(roots) * eig.vectors.adjoint();
  return HermitianMatrix(0.5 * (s + s.adjoint()));
}

Gevd gevd_definite(const HermitianMatrix& a, const HermitianMatrix& b,
                   const NumericPolicy& policy) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("gevd_definite: dimension mismatch");
  }
  HermitianMatrix b_isqrt = [&] {
    try {
      return psd_sqrt(b, /*inverse=*/true, policy);
    } catch (const std::exception&) {
      throw std::invalid_argument("gevd_definite: B is not positive definite");
    }
  }();
  Matrix w = b_isqrt.mat() * a.mat() * b_isqrt.mat();
  EigDecomposition eig = hermitian_eig(HermitianMatrix(0.5 * (w + w.adjoint())));
  if (eig.values.minCoeff() <= 0.0) {
    throw std::invalid_argument("gevd_definite: A is not positive definite");
  }
  Gevd out;
  out.vectors = b_isqrt.mat() * eig.vectors;
  out.values = eig.values;
  out.count_above_one = 0;
  for (Index i = 0; i < out.values.size(); ++i) {
    if (out.values[i] > 1.0 + policy.eig_one_tol) ++out.count_above_one;
  }
  return out;
}

double logdet_hpd(const HermitianMatrix& a) {
  Eigen::LLT<Matrix> llt(a.mat());
  if (llt.info() != Eigen::Success) {
    throw NumericalError("logdet_hpd: matrix is not positive definite");
  }
  double sum = 0.0;
  const auto& l = llt.matrixLLT();
  for (Index i = 0; i < a.dim(); ++i) sum += std::log(l(i, i).real());
  return 2.0 * sum;
}

}  // namespace wiretap
