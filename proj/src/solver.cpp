#include "wiretap/solver.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "wiretap/oracle.hpp"

namespace wiretap {

namespace {

constexpr double kRankCutoffScale = 1e-6;  // numerical rank: eig > scale * Tr(Q)

int numerical_rank(const HermitianMatrix& q) {
  EigDecomposition eig = hermitian_eig(q);
  const double cutoff = kRankCutoffScale * std::max(q.trace(), 0.0);
  int r = 0;
  for (Index i = 0; i < eig.values.size(); ++i) {
    if (eig.values[i] > cutoff) ++r;
  }
  return r;
}

Solution zero_capacity_solution(Index n) {
  Solution sol;
  sol.Q = HermitianMatrix::Zero(n);
  sol.capacity_nats = 0.0;
  sol.rank = 0;
  sol.method = Method::ZeroCapacity;
  return sol;
}

HermitianMatrix symm(const Matrix& m) {
  return HermitianMatrix(0.5 * (m + m.adjoint()));
}

}  // namespace

const char* to_string(Method method) {
  switch (method) {
    case Method::FullRankClosedForm: return "FullRankClosedForm";
    case Method::ReducedEquivalent: return "ReducedEquivalent";
    case Method::RankOne: return "RankOne";
    case Method::WaterFilling: return "WaterFilling";
    case Method::ZeroCapacity: return "ZeroCapacity";
    case Method::NumericalOracle: return "NumericalOracle";
  }
  return "?";
}

MatrixConstraintSolution solve_matrix_constraint(const GramPair& grams,
                                                 const HermitianMatrix& s,
                                                 const NumericPolicy& policy) {
  if (s.dim() != grams.dim()) {
    throw std::invalid_argument("solve_matrix_constraint: dimension mismatch");
  }
  const Index n = grams.dim();
  HermitianMatrix s_half = psd_sqrt(s, false, policy);
  const Matrix eye = Matrix::Identity(n, n);
  HermitianMatrix pa = symm(s_half.mat() * grams.A.mat() * s_half.mat() + eye);
  HermitianMatrix pb = symm(s_half.mat() * grams.B.mat() * s_half.mat() + eye);

  MatrixConstraintSolution out;
  out.gevd = gevd_definite(pa, pb, policy);
  const int b = out.gevd.count_above_one;
  if (b == 0) {
    out.capacity_nats = 0.0;
    out.Q_S = HermitianMatrix::Zero(n);
    return out;
  }
  double cap = 0.0;
  for (int i = 0; i < b; ++i) cap += std::log(out.gevd.values[i]);
  out.capacity_nats = cap;

  const Matrix c1 = out.gevd.vectors.leftCols(b);
  const Matrix gram_c1 = c1.adjoint() * c1;
  const Matrix mid = gram_c1.llt().solve(Matrix::Identity(b, b));
  out.Q_S = symm(s_half.mat() * c1 * mid * c1.adjoint() * s_half.mat());
  return out;
}

FullRankWorkspace build_workspace(const GramPair& grams, const NumericPolicy& policy) {
  DifferenceClass cls = classify_difference(grams, policy);
  if (cls.kind != DifferenceKind::PositiveDefinite) {
    throw std::invalid_argument("build_workspace: A - B must be positive definite");
  }
  const Index n = grams.dim();
  FullRankWorkspace ws;

  // Sbar = (A - B)^{-1} from the classification's eigendecomposition.
  RealVector inv = cls.eigen.values.cwiseInverse();
  ws.S_bar = symm(cls.eigen.vectors * complex_diag(inv) * cls.eigen.vectors.adjoint());
  HermitianMatrix sbar_half = psd_sqrt(ws.S_bar, false, policy);

  Matrix mg = sbar_half.mat() * grams.B.mat() * sbar_half.mat() + Matrix::Identity(n, n);
  EigDecomposition dg = hermitian_eig(symm(mg));
  ws.Phi = dg.vectors;
  ws.D = dg.values;
  ws.D_reg = ws.D.cwiseMax(1.0 + policy.epsilon_reg);

  // Diagonal scale (I - D^{-1})^{-1/2} D^{-1}, on the floored spectrum.
  RealVector scale(n);
  for (Index i = 0; i < n; ++i) {
    scale[i] = 1.0 / (ws.D_reg[i] * std::sqrt(1.0 - 1.0 / ws.D_reg[i]));
  }
  Matrix proj = ws.Phi.adjoint() * ws.S_bar.mat() * ws.Phi;
  const Matrix scale_d = complex_diag(scale);
  ws.Sigma_bar = symm(scale_d * proj * scale_d);

  EigDecomposition sg = hermitian_eig(ws.Sigma_bar);
  ws.U = sg.vectors;
  ws.Omega = sg.values;
  if (ws.Omega.minCoeff() <= 0.0) {
    throw NumericalError("build_workspace: Sigma_bar is not positive definite");
  }

  const Matrix sphi = sbar_half.mat() * ws.Phi;
  ws.L = sphi * scale_d * ws.U;
  ws.N = symm(sphi * complex_diag(ws.D_reg.cwiseInverse()) * sphi.adjoint());
  ws.L_col_sq.resize(n);
  for (Index j = 0; j < n; ++j) ws.L_col_sq[j] = ws.L.col(j).squaredNorm();
  ws.trace_N = ws.N.trace();

  // Reconstruction guard: the raw (Phi, D) pair must reproduce both Grams.
  const double ref = std::max(1.0, grams.A.frobenius_norm());
  Matrix sbar_inv_half_phi = psd_sqrt(ws.S_bar, true, policy).mat() * ws.Phi;
  Matrix rec_a = sbar_inv_half_phi * complex_diag(ws.D) * sbar_inv_half_phi.adjoint();
  Matrix rec_b = sbar_inv_half_phi * complex_diag((ws.D.array() - 1.0).matrix()) *
                 sbar_inv_half_phi.adjoint();
  if ((rec_a - grams.A.mat()).norm() > 1e-8 * ref ||
      (rec_b - grams.B.mat()).norm() > 1e-8 * ref) {
    throw NumericalError("build_workspace: reconstruction check failed");
  }
  return ws;
}

RealVector lambda1_of_mu(const FullRankWorkspace& ws, double mu) {
  if (!(mu > 0.0)) {
    throw std::invalid_argument("lambda1_of_mu: mu must be positive");
  }
  RealVector lam(ws.Omega.size());
  for (Index i = 0; i < ws.Omega.size(); ++i) {
    // 0.5 * (-1 + sqrt(1 + c)) written as 0.5 c / (1 + sqrt(1 + c)) so small
    // c does not cancel.
    const double c = 4.0 / (mu * ws.Omega[i]);
    lam[i] = 0.5 * c / (1.0 + std::sqrt(1.0 + c));
  }
  return lam;
}

HermitianMatrix q_of_mu(const FullRankWorkspace& ws, double mu) {
  RealVector lam = lambda1_of_mu(ws, mu);
  return symm(ws.L * complex_diag(lam) * ws.L.adjoint() - ws.N.mat());
}

namespace {

double trace_q_of_mu(const FullRankWorkspace& ws, double mu) {
  RealVector lam = lambda1_of_mu(ws, mu);
  return lam.dot(ws.L_col_sq) - ws.trace_N;
}

struct BisectResult {
  double mu;
  int iterations;
  double trace_residual;
};

// Tr(Q(mu)) is continuous and strictly decreasing, unbounded as mu -> 0 and
// negative as mu -> inf, so a sign-bracketing bisection always succeeds.
BisectResult bisect_mu(const FullRankWorkspace& ws, double p_t,
                       const NumericPolicy& policy) {
  double lo = 1e-12;
  double hi = 1.0;
  int widen = 0;
  while (trace_q_of_mu(ws, lo) <= p_t) {
    lo *= 0.25;
    if (++widen > 1200 || lo < 1e-290) {
      throw NumericalError("solve_full_rank: failed to bracket the multiplier from below");
    }
  }
  widen = 0;
  while (trace_q_of_mu(ws, hi) >= p_t) {
    hi *= 2.0;
    if (++widen > 2400 || hi > 1e290) {
      throw NumericalError("solve_full_rank: failed to bracket the multiplier from above");
    }
  }
  const double tol = policy.trace_tol_scale * std::max(1.0, p_t);
  double mid = 0.5 * (lo + hi);
  double resid = trace_q_of_mu(ws, mid) - p_t;
  int it = 0;
  for (; it < policy.bisection_cap; ++it) {
    mid = 0.5 * (lo + hi);
    resid = trace_q_of_mu(ws, mid) - p_t;
    if (std::abs(resid) <= tol) break;
    if (resid > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (std::abs(resid) > tol) {
    throw NumericalError("solve_full_rank: multiplier bisection did not reach tolerance");
  }
  return BisectResult{mid, it, resid};
}

}  // namespace

Solution solve_full_rank(const GramPair& grams, double p_t, const NumericPolicy& policy) {
  if (!(p_t > 0.0)) {
    throw std::invalid_argument("solve_full_rank: P_t must be positive");
  }
  FullRankWorkspace ws = build_workspace(grams, policy);
  BisectResult bisect = bisect_mu(ws, p_t, policy);
  RealVector lam = lambda1_of_mu(ws, bisect.mu);

  // Validity: U L1 U^H > D - I, tested against the raw spectrum with a
  // margin relative to ||D||_2.
  Matrix gap = ws.U * complex_diag(lam) * ws.U.adjoint() -
               complex_diag((ws.D.array() - 1.0).matrix());
  EigDecomposition gap_eig = hermitian_eig(symm(gap));
  const double margin = gap_eig.values.minCoeff();
  const bool valid = margin > policy.eig_one_tol * ws.D.maxCoeff();

  double cap = 0.0;
  for (Index i = 0; i < lam.size(); ++i) {
    cap += std::log(lam[i]) - std::log1p(lam[i]);
    cap += std::log(ws.D_reg[i]) - std::log(ws.D_reg[i] - 1.0);
  }

  Solution sol;
  sol.Q = q_of_mu(ws, bisect.mu);
  sol.capacity_nats = cap;
  sol.mu = bisect.mu;
  sol.method = Method::FullRankClosedForm;
  sol.full_rank_valid = valid;
  sol.rank = valid ? numerical_rank(sol.Q) : 0;
  sol.diagnostics["validity_margin"] = margin;
  sol.diagnostics["bisection_iterations"] = static_cast<double>(bisect.iterations);
  sol.diagnostics["trace_residual"] = bisect.trace_residual;
  if (valid) {
    sol.diagnostics["rate_delta"] = cap - secrecy_rate(grams, sol.Q, policy);
  }
  return sol;
}

ReducedProblem reduce_equivalent(const GramPair& grams, double tol) {
  DifferenceClass cls = classify_difference(grams, tol);
  if (cls.kind != DifferenceKind::PsdSingular) {
    throw std::invalid_argument("reduce_equivalent: difference matrix is not PSD-singular");
  }
  const int m = cls.m;
  if (m < 1 || m >= grams.dim()) {
    throw std::invalid_argument("reduce_equivalent: rank of the difference is out of range");
  }
  const Matrix psi_m = cls.eigen.vectors.leftCols(m);
  HermitianMatrix j1 = symm(psi_m.adjoint() * grams.B.mat() * psi_m);
  Matrix lm = complex_diag(cls.eigen.values.head(m));
  HermitianMatrix a_red = symm(lm + j1.mat());
  return ReducedProblem{GramPair(std::move(a_red), std::move(j1)), psi_m};
}

HermitianMatrix lift_solution(const HermitianMatrix& reduced_q, const Matrix& basis) {
  if (basis.cols() != reduced_q.dim()) {
    throw std::invalid_argument("lift_solution: basis/covariance dimension mismatch");
  }
  return symm(basis * reduced_q.mat() * basis.adjoint());
}

Solution solve_rank_one(const GramPair& grams, double p_t, const NumericPolicy& policy) {
  if (!(p_t > 0.0)) {
    throw std::invalid_argument("solve_rank_one: P_t must be positive");
  }
  const Index n = grams.dim();
  const Matrix eye = Matrix::Identity(n, n);
  Gevd pencil = gevd_definite(symm(eye + p_t * grams.A.mat()),
                              symm(eye + p_t * grams.B.mat()), policy);
  if (pencil.values[0] <= 1.0 + policy.eig_one_tol) {
    return zero_capacity_solution(n);
  }
  Vector u = pencil.vectors.col(0);
  u /= u.norm();
  Solution sol;
  sol.Q = symm(p_t * (u * u.adjoint()));
  sol.capacity_nats = std::log(pencil.values[0]);
  sol.rank = 1;
  sol.method = Method::RankOne;
  sol.diagnostics["lambda_1"] = pencil.values[0];
  return sol;
}

Solution water_filling(const HermitianMatrix& gram_h, double p_t,
                       const NumericPolicy& policy) {
  if (!(p_t > 0.0)) {
    throw std::invalid_argument("water_filling: P_t must be positive");
  }
  EigDecomposition eig = hermitian_eig(gram_h);
  const double scale = eig.values.cwiseAbs().maxCoeff();
  if (eig.values.minCoeff() < -policy.psd_tol_scale * std::max(1.0, scale)) {
    throw std::invalid_argument("water_filling: Gram matrix is not positive semidefinite");
  }
  const Index n = gram_h.dim();
  int active = 0;
  for (Index i = 0; i < n; ++i) {
    if (eig.values[i] > policy.psd_tol_scale * std::max(1.0, scale)) ++active;
  }
  if (active == 0) {
    return zero_capacity_solution(n);
  }
  // Largest k with water level above 1/lambda_k; eigenvalues descend, so
  // inverse noise levels ascend and the standard scan applies.
  double level = 0.0;
  int k = active;
  double inv_sum = 0.0;
  for (int i = 0; i < active; ++i) inv_sum += 1.0 / eig.values[i];
  for (; k >= 1; --k) {
    level = (p_t + inv_sum) / k;
    if (level > 1.0 / eig.values[k - 1]) break;
    inv_sum -= 1.0 / eig.values[k - 1];
  }
  RealVector q = RealVector::Zero(n);
  double cap = 0.0;
  for (int i = 0; i < k; ++i) {
    q[i] = level - 1.0 / eig.values[i];
    cap += std::log1p(eig.values[i] * q[i]);
  }
  Solution sol;
  sol.Q = symm(eig.vectors * complex_diag(q) * eig.vectors.adjoint());
  sol.capacity_nats = cap;
  sol.rank = k;
  sol.mu = 1.0 / level;
  sol.method = Method::WaterFilling;
  return sol;
}

double high_snr_capacity(const GramPair& grams, const NumericPolicy& policy) {
  FullRankWorkspace ws = build_workspace(grams, policy);
  double cap = 0.0;
  for (Index i = 0; i < ws.D.size(); ++i) {
    if (ws.D[i] <= 1.0 + policy.eig_one_tol) {
      throw NumericalError(
          "high_snr_capacity: asymptote undefined for a rank-deficient eavesdropper Gram");
    }
    cap += std::log1p(1.0 / (ws.D[i] - 1.0));
  }
  return cap;
}

Solution solve(const GramPair& grams, double p_t, const NumericPolicy& policy) {
  if (!(p_t > 0.0)) {
    throw std::invalid_argument("solve: P_t must be positive");
  }
  const Index n = grams.dim();

  // Zero eavesdropper Gram: the problem is a point-to-point link and
  // water-filling is exact; no regularization detour.
  if (grams.B.frobenius_norm() == 0.0) {
    return water_filling(grams.A, p_t, policy);
  }

  DifferenceClass cls = classify_difference(grams, policy);
  switch (cls.kind) {
    case DifferenceKind::NegativeSemidefinite:
      // No pencil eigenvalue exceeds one for any S, so the capacity is zero.
      return zero_capacity_solution(n);

    case DifferenceKind::PositiveDefinite: {
      Solution closed = solve_full_rank(grams, p_t, policy);
      if (closed.full_rank_valid) {
        return closed;
      }
      // Intermediate-rank regime: no closed form; the problem is convex, so
      // the ascent oracle is exact up to tolerance. Rank-one provides a
      // certified lower bound.
      Solution lower = solve_rank_one(grams, p_t, policy);
      Solution oracle = projected_gradient_ascent(grams, p_t, AscentOptions{}, policy);
      oracle.diagnostics["closed_form_margin"] = closed.diagnostics["validity_margin"];
      oracle.diagnostics["rank_one_lower_bound"] = lower.capacity_nats;
      if (lower.capacity_nats > oracle.capacity_nats + 1e-8) {
        // The ascent stalled below its certified lower bound; surface the
        // rank-one solution instead.
        lower.diagnostics = oracle.diagnostics;
        lower.diagnostics["oracle_capacity"] = oracle.capacity_nats;
        return lower;
      }
      return oracle;
    }

    case DifferenceKind::PsdSingular: {
      ReducedProblem red = reduce_equivalent(grams, cls.tol);
      Solution inner = solve(red.grams, p_t, policy);
      Solution lifted;
      lifted.Q = lift_solution(inner.Q, red.basis);
      lifted.capacity_nats = inner.capacity_nats;
      lifted.mu = inner.mu;
      lifted.method = Method::ReducedEquivalent;
      lifted.rank = numerical_rank(lifted.Q);
      lifted.diagnostics["reduced_dim"] = static_cast<double>(cls.m);
      lifted.diagnostics["inner_method"] = static_cast<double>(inner.method);

      // The reduction discards the coupling between the column space of
      // A - B and its null space (the off-diagonal block of Psi^H B Psi).
      // When that block is nonzero the reduced problem can undershoot, so
      // cross-check against the ascent oracle on the original problem,
      // which is exact here (A - B >= 0 keeps the problem convex).
      Solution oracle = projected_gradient_ascent(grams, p_t, AscentOptions{}, policy);
      lifted.diagnostics["oracle_capacity"] = oracle.capacity_nats;
      if (oracle.capacity_nats > lifted.capacity_nats + 1e-9) {
        oracle.diagnostics["reduced_capacity"] = lifted.capacity_nats;
        oracle.diagnostics["reduction_gap"] =
            oracle.capacity_nats - lifted.capacity_nats;
        oracle.diagnostics["rank_bound"] = static_cast<double>(cls.m);
        return oracle;
      }
      return lifted;
    }

    case DifferenceKind::Indefinite: {
      AscentOptions opts;
      opts.starts = multistart_covariances(grams, p_t, 8, kMultistartSeed);
      Solution oracle = projected_gradient_ascent(grams, p_t, opts, policy);
      oracle.diagnostics["rank_bound"] = static_cast<double>(cls.m);
      oracle.diagnostics["certified"] = 0.0;
      return oracle;
    }
  }
  throw NumericalError("solve: unreachable classification");
}

}  // namespace wiretap
