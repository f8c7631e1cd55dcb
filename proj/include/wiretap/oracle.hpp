#pragma once

#include <cstdint>
#include <vector>

#include "wiretap/model.hpp"
#include "wiretap/solution.hpp"

namespace wiretap {

/// KKT residuals of the trace-constrained secrecy-rate problem at a
/// candidate covariance: gradient of the rate, estimated multiplier
/// mu = Tr(grad * Q) / P_t, multiplier matrix M = mu I - grad, and the
/// stationarity / dual / primal residuals.
struct KktReport {
  HermitianMatrix gradient;
  double mu_est = 0.0;
  HermitianMatrix M;
  double stationarity_residual = 0.0;      // ||M Q||_F
  double dual_feasibility_residual = 0.0;  // max(0, -min-eig(M))
  double primal_trace_residual = 0.0;      // |Tr(Q) - P_t|
  double primal_psd_residual = 0.0;        // max(0, -min-eig(Q))

  /// Verification thresholds: stationarity <= 1e-6 ||grad||_F,
  /// dual <= 1e-8, both primal residuals <= 1e-8.
  bool verified() const;
};

/// Options for the projected-gradient ascent oracle. Defaults converge
/// well past the 1e-5 agreement the acceptance checks demand for the
/// matrix sizes this library targets.
struct AscentOptions {
  int max_iters = 5000;
  double step_init = 1.0;
  double backtrack_factor = 0.5;
  double sufficient_increase = 1e-4;
  /// Stop when the relative objective change over stop_window iterations
  /// falls to stop_tol.
  double stop_tol = 1e-12;
  int stop_window = 10;
  /// Initial covariances; empty means the uniform-power start P_t/n I.
  std::vector<HermitianMatrix> starts;
  /// Optional sink for the per-iteration objective values of the winning
  /// start (test hook; ignored when null).
  std::vector<double>* objective_trace = nullptr;
};

/// Deterministic seed for the multi-start covariance set.
inline constexpr std::uint64_t kMultistartSeed = 0x5eed0001u;

/// Gradient of the secrecy rate at Q, in Gram form
/// (I + A Q)^{-1} A - B (Q B + I)^{-1}, symmetrized.
HermitianMatrix rate_gradient(const GramPair& grams, const HermitianMatrix& q);

/// Frobenius-nearest point of {Q >= 0, Tr(Q) = P_t}: eigendecompose,
/// project the spectrum onto the scaled simplex by the sorted-threshold
/// rule, reassemble.
HermitianMatrix project_trace_psd(const HermitianMatrix& x, double p_t);

/// Monotone projected-gradient ascent of the secrecy rate over
/// {Q >= 0, Tr(Q) = P_t} with Armijo backtracking; returns the best
/// iterate across all starts. The best found rate at or below zero yields
/// a zero-capacity solution, matching the trace-inequality problem.
Solution projected_gradient_ascent(const GramPair& grams, double p_t,
                                   const AscentOptions& opts = AscentOptions{},
                                   const NumericPolicy& policy = NumericPolicy::defaults());

/// Deterministic multi-start set: uniform power, rank-one seeds from the
/// top pencil eigenvectors of (I + P_t A, I + P_t B), then seeded random
/// PSD matrices normalized to trace P_t. Order is fixed so results are
/// reproducible; pass a different seed to explore.
std::vector<HermitianMatrix> multistart_covariances(
    const GramPair& grams, double p_t, int count,
    std::uint64_t seed = kMultistartSeed);

/// KKT residual report for a candidate covariance; see KktReport.
KktReport kkt_residuals(const GramPair& grams, const HermitianMatrix& q, double p_t);

}  // namespace wiretap
