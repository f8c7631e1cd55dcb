#include "wiretap/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace wiretap {

namespace {

HermitianMatrix symm(const Matrix& m) {
  return HermitianMatrix(0.5 * (m + m.adjoint()));
}

// Secrecy rate with the Gram square roots hoisted out of the inner loop.
double rate_with_roots(const Matrix& root_a, const Matrix& root_b,
                       const HermitianMatrix& q) {
  const Index n = q.dim();
  const Matrix eye = Matrix::Identity(n, n);
  Matrix ia = eye + root_a * q.mat() * root_a;
  Matrix ib = eye + root_b * q.mat() * root_b;
  return logdet_hpd(symm(ia)) - logdet_hpd(symm(ib));
}

int numerical_rank(const HermitianMatrix& q) {
  EigDecomposition eig = hermitian_eig(q);
  const double cutoff = 1e-6 * std::max(q.trace(), 0.0);
  int r = 0;
  for (Index i = 0; i < eig.values.size(); ++i) {
    if (eig.values[i] > cutoff) ++r;
  }
  return r;
}

// Deterministic standard normal from raw mt19937_64 output (Box-Muller on
// 53-bit uniforms), so the multi-start set does not depend on the standard
// library's distribution implementation.
class NormalSource {
 public:
  explicit NormalSource(std::uint64_t seed) : gen_(seed) {}

  double operator()() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * M_PI * u2);
    have_spare_ = true;
    return r * std::cos(2.0 * M_PI * u2);
  }

 private:
  double uniform() {
    return (gen_() >> 11) * 0x1.0p-53;
  }
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace

bool KktReport::verified() const {
  const double grad_scale = gradient.frobenius_norm();
  return stationarity_residual <= 1e-6 * grad_scale &&
         dual_feasibility_residual <= 1e-8 &&
         primal_trace_residual <= 1e-8 && primal_psd_residual <= 1e-8;
}

HermitianMatrix rate_gradient(const GramPair& grams, const HermitianMatrix& q) {
  if (q.dim() != grams.dim()) {
    throw std::invalid_argument("rate_gradient: covariance dimension mismatch");
  }
  const Index n = grams.dim();
  const Matrix eye = Matrix::Identity(n, n);
  Matrix term_a = (eye + grams.A.mat() * q.mat()).partialPivLu().solve(grams.A.mat());
  Matrix term_b = grams.B.mat() * (q.mat() * grams.B.mat() + eye).partialPivLu().solve(eye);
  return symm(term_a - term_b);
}

HermitianMatrix project_trace_psd(const HermitianMatrix& x, double p_t) {
  if (!(p_t > 0.0)) {
    throw std::invalid_argument("project_trace_psd: P_t must be positive");
  }
  EigDecomposition eig = hermitian_eig(x);
  const Index n = eig.values.size();
  // Sorted-threshold projection onto {v >= 0, sum v = P_t}; values are
  // already descending.
  double cumsum = 0.0;
  double theta = 0.0;
  for (Index i = 0; i < n; ++i) {
    cumsum += eig.values[i];
    const double cand = (cumsum - p_t) / static_cast<double>(i + 1);
    if (eig.values[i] - cand > 0.0) theta = cand;
  }
  RealVector projected = (eig.values.array() - theta).cwiseMax(0.0);
  return symm(eig.vectors * complex_diag(projected) * eig.vectors.adjoint());
}

Solution projected_gradient_ascent(const GramPair& grams, double p_t,
                                   const AscentOptions& opts,
                                   const NumericPolicy& policy) {
  if (!(p_t > 0.0)) {
    throw std::invalid_argument("projected_gradient_ascent: P_t must be positive");
  }
  const Index n = grams.dim();
  const Matrix root_a = psd_sqrt(grams.A, false, policy).mat();
  const Matrix root_b = psd_sqrt(grams.B, false, policy).mat();

  std::vector<HermitianMatrix> starts = opts.starts;
  if (starts.empty()) {
    starts.push_back(
        HermitianMatrix(Matrix::Identity(n, n) * Complex(p_t / static_cast<double>(n), 0.0)));
  }

  HermitianMatrix best_q;
  double best_f = -std::numeric_limits<double>::infinity();
  bool best_converged = false;
  int best_iters = 0;
  std::vector<double> best_trace;

  for (std::size_t s = 0; s < starts.size(); ++s) {
    HermitianMatrix q = project_trace_psd(starts[s], p_t);
    double f = rate_with_roots(root_a, root_b, q);
    std::vector<double> trace;
    trace.push_back(f);
    bool converged = false;
    int it = 0;
    for (; it < opts.max_iters; ++it) {
      HermitianMatrix grad = rate_gradient(grams, q);
      double step = opts.step_init;
      bool accepted = false;
      HermitianMatrix q_next;
      double f_next = f;
      while (step > 1e-18) {
        q_next = project_trace_psd(HermitianMatrix(q.mat() + step * grad.mat()), p_t);
        const double ascent =
            (grad.mat().adjoint() * (q_next.mat() - q.mat())).trace().real();
        if (ascent <= 0.0) break;  // stationary under projection
        f_next = rate_with_roots(root_a, root_b, q_next);
        if (f_next >= f + opts.sufficient_increase * ascent) {
          accepted = true;
          break;
        }
        step *= opts.backtrack_factor;
      }
      if (!accepted) {
        converged = true;
        break;
      }
      q = q_next;
      f = f_next;
      trace.push_back(f);
      const int w = opts.stop_window;
      if (static_cast<int>(trace.size()) > w) {
        const double then = trace[trace.size() - 1 - w];
        if (f - then <= opts.stop_tol * std::max(1.0, std::abs(f))) {
          converged = true;
          break;
        }
      }
    }
    // Ties resolve to the earliest start so the result is deterministic.
    if (f > best_f) {
      best_f = f;
      best_q = q;
      best_converged = converged;
      best_iters = it;
      best_trace = std::move(trace);
    }
  }

  if (opts.objective_trace != nullptr) {
    *opts.objective_trace = best_trace;
  }

  if (best_f <= 0.0) {
    // The rate at full power never beat the zero covariance, which is
    // feasible under the trace-inequality formulation.
    Solution zero;
    zero.Q = HermitianMatrix::Zero(n);
    zero.method = Method::ZeroCapacity;
    zero.diagnostics["oracle_best_rate"] = best_f;
    return zero;
  }

  Solution sol;
  sol.Q = best_q;
  sol.capacity_nats = best_f;
  sol.rank = numerical_rank(best_q);
  sol.method = Method::NumericalOracle;
  sol.mu = (rate_gradient(grams, best_q).mat() * best_q.mat()).trace().real() / p_t;
  sol.diagnostics["iterations"] = static_cast<double>(best_iters);
  sol.diagnostics["starts"] = static_cast<double>(starts.size());
  if (!best_converged) {
    sol.diagnostics["convergence_warning"] = 1.0;
  }
  double min_ascent = 0.0;
  for (std::size_t i = 1; i < best_trace.size(); ++i) {
    min_ascent = std::min(min_ascent, best_trace[i] - best_trace[i - 1]);
  }
  sol.diagnostics["min_ascent_step"] = min_ascent;
  return sol;
}

std::vector<HermitianMatrix> multistart_covariances(const GramPair& grams, double p_t,
                                                    int count, std::uint64_t seed) {
  if (count < 1) {
    throw std::invalid_argument("multistart_covariances: count must be positive");
  }
  const Index n = grams.dim();
  const Matrix eye = Matrix::Identity(n, n);
  std::vector<HermitianMatrix> starts;
  starts.reserve(static_cast<std::size_t>(count));
  starts.push_back(HermitianMatrix(eye * Complex(p_t / static_cast<double>(n), 0.0)));

  // Rank-one seeds from the strongest pencil directions.
  Gevd pencil = gevd_definite(
      HermitianMatrix(0.5 * ((eye + p_t * grams.A.mat()) + (eye + p_t * grams.A.mat()).adjoint())),
      HermitianMatrix(0.5 * ((eye + p_t * grams.B.mat()) + (eye + p_t * grams.B.mat()).adjoint())));
  const int n_rank_one = std::min<int>({3, static_cast<int>(n), count - 1});
  for (int k = 0; k < n_rank_one; ++k) {
    Vector u = pencil.vectors.col(k);
    u /= u.norm();
    starts.push_back(HermitianMatrix(p_t * (u * u.adjoint())));
  }

  NormalSource normal(seed);
  while (static_cast<int>(starts.size()) < count) {
    Matrix z(n, n);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) z(i, j) = Complex(normal(), normal());
    }
    Matrix zz = z * z.adjoint();
    zz *= p_t / zz.trace().real();
    starts.push_back(HermitianMatrix(0.5 * (zz + zz.adjoint())));
  }
  return starts;
}

KktReport kkt_residuals(const GramPair& grams, const HermitianMatrix& q, double p_t) {
  if (!(p_t > 0.0)) {
    throw std::invalid_argument("kkt_residuals: P_t must be positive");
  }
  KktReport report;
  report.gradient = rate_gradient(grams, q);
  report.mu_est = (report.gradient.mat() * q.mat()).trace().real() / p_t;
  report.M = symm(report.mu_est * Matrix::Identity(q.dim(), q.dim()) - report.gradient.mat());
  report.stationarity_residual = (report.M.mat() * q.mat()).norm();
  EigDecomposition m_eig = hermitian_eig(report.M);
  report.dual_feasibility_residual = std::max(0.0, -m_eig.values.minCoeff());
  report.primal_trace_residual = std::abs(q.trace() - p_t);
  EigDecomposition q_eig = hermitian_eig(q);
  report.primal_psd_residual = std::max(0.0, -q_eig.values.minCoeff());
  return report;
}

}  // namespace wiretap
