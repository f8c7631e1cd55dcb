#pragma once

#include "wiretap/model.hpp"
#include "wiretap/solution.hpp"

namespace wiretap {

/// Channel-only quantities behind the full-rank closed form, valid when
/// A - B > 0:
///   Sbar      = (A - B)^{-1}
///   (Phi, D)  = eigendecomposition of Sbar^{1/2} B Sbar^{1/2} + I
///   Sigma_bar = (I - D^{-1})^{-1/2} D^{-1} Phi^H Sbar Phi D^{-1} (I - D^{-1})^{-1/2}
///   (U, Omega)= eigendecomposition of Sigma_bar
/// D - I >= 0 always holds; entries of D at or below 1 + epsilon_reg are
/// floored (D_reg) before D - I is inverted, which covers rank-deficient
/// eavesdropper Grams.
///
/// The cached factor L = Sbar^{1/2} Phi (I - D_reg^{-1})^{-1/2} D_reg^{-1} U
/// and N = Sbar^{1/2} Phi D_reg^{-1} Phi^H Sbar^{1/2} turn the covariance
/// into Q(mu) = L diag(lambda1(mu)) L^H - N, a cancellation-free form that
/// stays accurate when D - I is nearly singular.
struct FullRankWorkspace {
  HermitianMatrix S_bar;
  Matrix Phi;
  RealVector D;      // raw eigenvalues, descending
  RealVector D_reg;  // floored at 1 + epsilon_reg
  HermitianMatrix Sigma_bar;
  Matrix U;
  RealVector Omega;  // descending, strictly positive

  Matrix L;
  HermitianMatrix N;     // equals (H^H H)^{-1} up to the D floor
  RealVector L_col_sq;   // squared column norms of L, for Tr(Q(mu))
  double trace_N = 0.0;
};

/// Capacity and optimal covariance under the matrix constraint Q <= S.
struct MatrixConstraintSolution {
  Gevd gevd;             // pencil (S^{1/2} A S^{1/2} + I, S^{1/2} B S^{1/2} + I)
  double capacity_nats = 0.0;
  HermitianMatrix Q_S;
};

/// Reduced problem for a PSD-singular difference matrix: an m-dimensional
/// Gram pair whose difference is positive definite, together with the
/// n x m basis that lifts reduced covariances back to the original space.
struct ReducedProblem {
  GramPair grams;
  Matrix basis;
};

/// Secrecy capacity under the matrix power constraint Q <= S: capacity is
/// the sum of log of the pencil's generalized eigenvalues above one, and
/// Q_S projects S^{1/2} onto the corresponding eigenvector block.
MatrixConstraintSolution solve_matrix_constraint(
    const GramPair& grams, const HermitianMatrix& s,
    const NumericPolicy& policy = NumericPolicy::defaults());

/// Builds the full-rank workspace. Requires A - B > 0.
FullRankWorkspace build_workspace(const GramPair& grams,
                                  const NumericPolicy& policy = NumericPolicy::defaults());

/// Per-direction multiplier solution lambda_i = (-1 + sqrt(1 + 4/(mu w_i)))/2,
/// strictly decreasing in mu. Requires mu > 0.
RealVector lambda1_of_mu(const FullRankWorkspace& ws, double mu);

/// Closed-form covariance candidate at a given multiplier. Hermitian by
/// construction; positive semidefiniteness is exactly what the validity
/// check certifies, so large mu yields indefinite output.
HermitianMatrix q_of_mu(const FullRankWorkspace& ws, double mu);

/// Full-rank closed form: bisect mu until Tr(Q) = P_t, then check the
/// validity condition U L1 U^H > D - I. When the check passes the returned
/// capacity log|L1| - log|L1 + I| + log|D| - log|D - I| equals the secrecy
/// rate of Q. Requires A - B > 0 and P_t > 0.
Solution solve_full_rank(const GramPair& grams, double p_t,
                         const NumericPolicy& policy = NumericPolicy::defaults());

/// Equivalent-channel reduction for a PSD-singular difference with
/// 1 <= m < n: eigendecompose A - B = Psi diag(Lm, 0) Psi^H, take J1 as
/// the leading m x m block of Psi^H B Psi, and return the m-dimensional
/// pair (Lm + J1, J1), whose difference Lm is positive definite.
ReducedProblem reduce_equivalent(const GramPair& grams, double tol);

/// Lifts a reduced covariance back: Q = basis * Q_m * basis^H. Preserves
/// trace, positive semidefiniteness, and the secrecy rate.
HermitianMatrix lift_solution(const HermitianMatrix& reduced_q, const Matrix& basis);

/// Rank-one solution: Q = P_t u u^H with u the normalized principal
/// generalized eigenvector of (I + P_t A, I + P_t B) and capacity
/// log(lambda_1), or a zero-capacity solution when lambda_1 <= 1.
Solution solve_rank_one(const GramPair& grams, double p_t,
                        const NumericPolicy& policy = NumericPolicy::defaults());

/// Classical water-filling on a single Gram matrix (the zero-eavesdropper
/// limit). Exact sorting-based allocation, no iteration.
Solution water_filling(const HermitianMatrix& gram_h, double p_t,
                       const NumericPolicy& policy = NumericPolicy::defaults());

/// High-power capacity asymptote log|I + (D - I)^{-1}|. Requires A - B > 0
/// and a full-rank B; throws NumericalError when the asymptote is
/// undefined because B is rank deficient.
double high_snr_capacity(const GramPair& grams,
                         const NumericPolicy& policy = NumericPolicy::defaults());

/// Dispatcher over the difference-matrix classification:
///  - NegativeSemidefinite: zero capacity.
///  - PositiveDefinite: closed form; oracle fallback when validity fails.
///  - PsdSingular: equivalent-channel reduction, cross-checked against the
///    oracle on the original problem (the better of the two is returned).
///  - Indefinite: multi-start oracle; not certified globally optimal.
/// A zero eavesdropper Gram short-circuits to exact water-filling.
Solution solve(const GramPair& grams, double p_t,
               const NumericPolicy& policy = NumericPolicy::defaults());

}  // namespace wiretap
