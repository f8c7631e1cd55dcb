#include "wiretap/model.hpp"

#include <cmath>
#include <limits>

namespace wiretap {

WiretapChannel::WiretapChannel(Matrix h, Matrix g) : H(std::move(h)), G(std::move(g)) {
  if (H.cols() < 1 || H.rows() < 1 || G.rows() < 1) {
    throw std::invalid_argument("WiretapChannel: empty channel matrix");
  }
  if (H.cols() != G.cols()) {
    throw std::invalid_argument("WiretapChannel: H and G must have the same column count");
  }
  if (!is_finite(H) || !is_finite(G)) {
    throw std::invalid_argument("WiretapChannel: non-finite channel entries");
  }
}

GramPair::GramPair(HermitianMatrix a, HermitianMatrix b, const NumericPolicy& policy)
    : A(std::move(a)), B(std::move(b)) {
  if (A.dim() != B.dim()) {
    throw std::invalid_argument("GramPair: dimension mismatch");
  }
  for (const HermitianMatrix* g : {&A, &B}) {
    EigDecomposition eig = hermitian_eig(*g);
    const double scale = eig.values.cwiseAbs().maxCoeff();
    if (eig.values.minCoeff() < -policy.psd_tol_scale * std::max(1.0, scale)) {
      throw std::invalid_argument("GramPair: Gram matrices must be positive semidefinite");
    }
  }
}

GramPair gram_pair(const WiretapChannel& channel) {
  Matrix a = channel.H.adjoint() * channel.H;
  Matrix b = channel.G.adjoint() * channel.G;
  return GramPair(HermitianMatrix(0.5 * (a + a.adjoint())),
                  HermitianMatrix(0.5 * (b + b.adjoint())));
}

const char* to_string(DifferenceKind kind) {
  switch (kind) {
    case DifferenceKind::PositiveDefinite: return "PositiveDefinite";
    case DifferenceKind::PsdSingular: return "PsdSingular";
    case DifferenceKind::Indefinite: return "Indefinite";
    case DifferenceKind::NegativeSemidefinite: return "NegativeSemidefinite";
  }
  return "?";
}

DifferenceClass classify_difference(const GramPair& grams, double tol) {
  EigDecomposition eig = hermitian_eig(HermitianMatrix(grams.A.mat() - grams.B.mat()));
  const double lo = eig.values.minCoeff();
  const double hi = eig.values.maxCoeff();
  int m = 0;
  for (Index i = 0; i < eig.values.size(); ++i) {
    if (eig.values[i] > tol) ++m;
  }
  DifferenceKind kind;
  if (lo > tol) {
    kind = DifferenceKind::PositiveDefinite;
  } else if (hi <= tol) {
    kind = DifferenceKind::NegativeSemidefinite;
  } else if (lo >= -tol) {
    kind = DifferenceKind::PsdSingular;
  } else {
    kind = DifferenceKind::Indefinite;
  }
  return DifferenceClass{kind, m, std::move(eig), tol};
}

DifferenceClass classify_difference(const GramPair& grams, const NumericPolicy& policy) {
  // ||A - B||_2 from the eigenvalues themselves keeps the tolerance relative.
  EigDecomposition eig = hermitian_eig(HermitianMatrix(grams.A.mat() - grams.B.mat()));
  const double norm2 = eig.values.cwiseAbs().maxCoeff();
  return classify_difference(grams, policy.class_tol_scale * norm2);
}

namespace {

HermitianMatrix clip_psd(const HermitianMatrix& q, const NumericPolicy& policy) {
  EigDecomposition eig = hermitian_eig(q);
  const double scale = eig.values.cwiseAbs().maxCoeff();
  if (eig.values.minCoeff() < -policy.psd_tol_scale * std::max(1.0, scale)) {
    throw std::invalid_argument("secrecy_rate: covariance is not positive semidefinite");
  }
  RealVector clipped = eig.values.cwiseMax(0.0);
  Matrix m = eig.vectors * complex_diag(clipped) * eig.vectors.adjoint();
  return HermitianMatrix(0.5 * (m + m.adjoint()));
}

}  // namespace

double secrecy_rate(const GramPair& grams, const HermitianMatrix& q,
                    const NumericPolicy& policy) {
  if (q.dim() != grams.dim()) {
    throw std::invalid_argument("secrecy_rate: covariance dimension mismatch");
  }
  HermitianMatrix qc = clip_psd(q, policy);
  const Index n = grams.dim();
  const Matrix eye = Matrix::Identity(n, n);
  double rate = 0.0;
  double sign = 1.0;
  for (const HermitianMatrix* g : {&grams.A, &grams.B}) {
    HermitianMatrix root = psd_sqrt(*g, false, policy);
    Matrix inner = eye + root.mat() * qc.mat() * root.mat();
    rate += sign * logdet_hpd(HermitianMatrix(0.5 * (inner + inner.adjoint())));
    sign = -sign;
  }
  return rate;
}

SpectralSummary spectral_summary(const GramPair& grams, const NumericPolicy& policy) {
  DifferenceClass cls = classify_difference(grams, policy);
  if (cls.kind != DifferenceKind::PositiveDefinite) {
    throw std::invalid_argument("spectral_summary: A - B must be positive definite");
  }
  // d_i from the same construction the full-rank solver uses (Sbar chain).
  Matrix diff = grams.A.mat() - grams.B.mat();
  EigDecomposition diff_eig = cls.eigen;
  RealVector inv = diff_eig.values.cwiseInverse();
  Matrix sbar = diff_eig.vectors * complex_diag(inv) * diff_eig.vectors.adjoint();
  HermitianMatrix sbar_h = psd_sqrt(HermitianMatrix(0.5 * (sbar + sbar.adjoint())), false, policy);
  Matrix mg = sbar_h.mat() * grams.B.mat() * sbar_h.mat() + Matrix::Identity(grams.dim(), grams.dim());
  EigDecomposition dg = hermitian_eig(HermitianMatrix(0.5 * (mg + mg.adjoint())));

  SpectralSummary out;
  out.gamma.resize(dg.values.size());
  bool all_finite = true;
  double log_sum = 0.0;
  for (Index i = 0; i < dg.values.size(); ++i) {
    const double d = dg.values[i];
    if (d <= 1.0 + policy.eig_one_tol) {
      out.gamma[i] = std::numeric_limits<double>::infinity();
      all_finite = false;
    } else {
      out.gamma[i] = 1.0 + 1.0 / (d - 1.0);
      log_sum += std::log(out.gamma[i]);
    }
  }
  out.sigma_sq = out.gamma;
  if (all_finite) out.log_term = log_sum;
  return out;
}

}  // namespace wiretap
