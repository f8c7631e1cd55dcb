#pragma once

#include <optional>

#include "wiretap/linalg.hpp"

namespace wiretap {

/// Wiretap channel: H reaches the legitimate receiver, G the eavesdropper.
/// Column counts must agree (same transmitter).
struct WiretapChannel {
  Matrix H;
  Matrix G;

  WiretapChannel(Matrix h, Matrix g);
  Index transmit_dim() const { return H.cols(); }
};

/// The Gram pair (H^H H, G^H G). Every capacity formula in this library
/// consumes channels only through their Grams, so equivalent problems
/// (such as the reduced problem for a singular difference matrix) can be
/// represented without factoring Grams back into channel matrices.
struct GramPair {
  HermitianMatrix A;  // H^H H
  HermitianMatrix B;  // G^H G

  GramPair(HermitianMatrix a, HermitianMatrix b,
           const NumericPolicy& policy = NumericPolicy::defaults());
  Index dim() const { return A.dim(); }
};

GramPair gram_pair(const WiretapChannel& channel);

enum class DifferenceKind {
  PositiveDefinite,
  PsdSingular,
  Indefinite,
  NegativeSemidefinite,
};

/// Sign classification of A - B, with m = number of eigenvalues above the
/// tolerance. m bounds the rank of the optimal input covariance.
struct DifferenceClass {
  DifferenceKind kind;
  int m;
  EigDecomposition eigen;  // of A - B, descending
  double tol;              // tolerance actually used
};

const char* to_string(DifferenceKind kind);

/// Classify A - B under an absolute eigenvalue tolerance. The overload
/// without an explicit tolerance uses class_tol_scale * ||A - B||_2,
/// which makes the classification scale-invariant.
DifferenceClass classify_difference(const GramPair& grams, double tol);
DifferenceClass classify_difference(const GramPair& grams,
                                    const NumericPolicy& policy = NumericPolicy::defaults());

/// Secrecy rate R(Q) = log|I + A Q| - log|I + B Q| in nats, evaluated in
/// the stable congruent form log|I + A^{1/2} Q A^{1/2}|. Q is symmetrized
/// and eigenvalues within -tau_psd of zero are clipped.
double secrecy_rate(const GramPair& grams, const HermitianMatrix& q,
                    const NumericPolicy& policy = NumericPolicy::defaults());

/// Per-direction generalized eigenvalues gamma_i of the pencil
/// (H^H H, G^H G), equal to the squared generalized singular values.
/// Directions the eavesdropper cannot see map to +infinity, in which case
/// the channel-only log term is undefined.
struct SpectralSummary {
  RealVector gamma;     // may contain +inf
  RealVector sigma_sq;  // == gamma
  std::optional<double> log_term;  // sum of log(sigma_i^2) when all finite
};

/// Requires A - B > 0. gamma_i = 1 + 1/(d_i - 1) where d_i are the
/// eigenvalues of Sbar^{1/2} B Sbar^{1/2} + I with Sbar = (A - B)^{-1};
/// entries with d_i <= 1 + eig_one_tol map to +infinity.
SpectralSummary spectral_summary(const GramPair& grams,
                                 const NumericPolicy& policy = NumericPolicy::defaults());

}  // namespace wiretap
