#include "wiretap/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>
#include <vector>

#include "wiretap/channel_io.hpp"
#include "wiretap/oracle.hpp"
#include "wiretap/solver.hpp"

namespace wiretap::cli {

namespace {

constexpr double kLn2 = 0.6931471805599453;

NumericPolicy policy_from(const std::string& path) {
  return path.empty() ? NumericPolicy::defaults() : load_policy_file(path);
}

struct GridSpec {
  double lo = 0.0;
  double hi = 0.0;
  int points = 0;
};

GridSpec parse_grid(const std::string& spec, const char* what) {
  GridSpec g;
  std::istringstream in(spec);
  char c1 = 0, c2 = 0;
  if (!(in >> g.lo >> c1 >> g.hi >> c2 >> g.points) || c1 != ':' || c2 != ':' ||
      !in.eof()) {
    throw ParseError(std::string(what) + ": expected lo:hi:points, got \"" + spec + "\"");
  }
  if (g.points < 2 || !(g.lo < g.hi)) {
    throw ParseError(std::string(what) + ": need lo < hi and points >= 2");
  }
  return g;
}

std::vector<double> grid_values(const GridSpec& g) {
  std::vector<double> values(static_cast<std::size_t>(g.points));
  for (int i = 0; i < g.points; ++i) {
    values[static_cast<std::size_t>(i)] =
        g.lo + (g.hi - g.lo) * static_cast<double>(i) / static_cast<double>(g.points - 1);
  }
  return values;
}

// Evaluates fn over [0, n) on a few threads with results kept in index
// order, so concurrent evaluation cannot perturb the output.
void indexed_parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(hw, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

std::string mu_cell(const Solution& sol) {
  return sol.mu ? format_double(*sol.mu) : std::string();
}

int run_guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace

int cmd_capacity(const CapacityArgs& args, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&]() -> int {
    if (!(args.p_t > 0.0)) {
      throw std::invalid_argument("capacity: --power must be positive");
    }
    const NumericPolicy policy = policy_from(args.tol_policy_path);
    ChannelFile file = load_channel_file(args.channel_path);
    GramPair grams = gram_pair(WiretapChannel(file.H, file.G));
    Solution sol = solve(grams, args.p_t, policy);
    KktReport kkt = kkt_residuals(grams, sol.Q, args.p_t);
    const bool kkt_ok =
        sol.method == Method::ZeroCapacity ? true : kkt.verified();

    const double value = args.bits ? sol.capacity_nats / kLn2 : sol.capacity_nats;
    out << std::setprecision(12);
    if (!file.label.empty()) out << "label:            " << file.label << "\n";
    out << "n_t:              " << grams.dim() << "\n"
        << "P_t:              " << args.p_t << "\n"
        << "capacity:         " << value << (args.bits ? " bits" : " nats") << "\n"
        << "method:           " << to_string(sol.method) << "\n"
        << "rank:             " << sol.rank << "\n"
        << "full_rank_valid:  " << (sol.full_rank_valid ? "true" : "false") << "\n";
    if (sol.mu) out << "mu:               " << *sol.mu << "\n";
    out << "kkt_verified:     " << (kkt_ok ? "true" : "false") << "\n";

    if (!args.out_path.empty()) {
      save_covariance_file(args.out_path, sol.Q.mat(), file.label);
    }
    return kExitOk;
  });
}

int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&]() -> int {
    const NumericPolicy policy = policy_from(args.tol_policy_path);
    ChannelFile file = load_channel_file(args.channel_path);
    GramPair grams = gram_pair(WiretapChannel(file.H, file.G));

    std::ostringstream csv;
    if (args.alpha_spec.empty()) {
      if (args.sweep_spec.empty()) {
        throw ParseError("sweep: either --sweep or --alpha-sweep is required");
      }
      GridSpec grid = parse_grid(args.sweep_spec, "--sweep");
      if (!(grid.lo > 0.0)) {
        throw ParseError("--sweep: p_min must be positive");
      }
      std::vector<double> p = grid_values(grid);
      std::vector<Solution> sols(p.size());
      std::vector<double> rank_one(p.size(), 0.0);
      indexed_parallel_for(p.size(), [&](std::size_t i) {
        sols[i] = solve(grams, p[i], policy);
        if (args.include_rank_one) {
          rank_one[i] = solve_rank_one(grams, p[i], policy).capacity_nats;
        }
      });
      csv << "p_t,capacity_nats,rank_one_nats,method,full_rank_valid,rank,mu\n";
      for (std::size_t i = 0; i < p.size(); ++i) {
        csv << format_double(p[i]) << ',' << format_double(sols[i].capacity_nats) << ','
            << (args.include_rank_one ? format_double(rank_one[i]) : std::string()) << ','
            << to_string(sols[i].method) << ','
            << (sols[i].full_rank_valid ? "true" : "false") << ',' << sols[i].rank << ','
            << mu_cell(sols[i]) << '\n';
      }
    } else {
      GridSpec grid = parse_grid(args.alpha_spec, "--alpha-sweep");
      if (grid.lo < 0.0) {
        throw ParseError("--alpha-sweep: a_min must be nonnegative");
      }
      if (!(args.p_t > 0.0)) {
        throw std::invalid_argument("sweep: --power must be positive");
      }
      const Index n = grams.dim();
      std::vector<double> alphas = grid_values(grid);
      std::vector<Solution> sols(alphas.size());
      const double p2p = water_filling(grams.A, args.p_t, policy).capacity_nats;
      indexed_parallel_for(alphas.size(), [&](std::size_t i) {
        Matrix b = alphas[i] * Matrix::Identity(n, n);
        GramPair scaled(grams.A, HermitianMatrix(b), policy);
        sols[i] = solve(scaled, args.p_t, policy);
      });
      csv << "alpha,capacity_nats,p2p_capacity_nats,method,full_rank_valid,rank,mu\n";
      for (std::size_t i = 0; i < alphas.size(); ++i) {
        csv << format_double(alphas[i]) << ',' << format_double(sols[i].capacity_nats)
            << ',' << format_double(p2p) << ',' << to_string(sols[i].method) << ','
            << (sols[i].full_rank_valid ? "true" : "false") << ',' << sols[i].rank << ','
            << mu_cell(sols[i]) << '\n';
      }
    }

    if (args.out_path.empty()) {
      out << csv.str();
    } else {
      std::ofstream f(args.out_path, std::ios::binary);
      if (!f) {
        throw ParseError("cannot open output file: " + args.out_path);
      }
      f << csv.str();
      if (!f) {
        throw ParseError("write failed: " + args.out_path);
      }
    }
    return kExitOk;
  });
}

int cmd_validate(const ValidateArgs& args, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&]() -> int {
    if (!(args.p_t > 0.0)) {
      throw std::invalid_argument("validate: --power must be positive");
    }
    // The KKT verification thresholds are fixed; the policy file is still
    // parsed so a bad path fails loudly here too.
    if (!args.tol_policy_path.empty()) load_policy_file(args.tol_policy_path);
    ChannelFile file = load_channel_file(args.channel_path);
    GramPair grams = gram_pair(WiretapChannel(file.H, file.G));
    Matrix q_raw = load_covariance_file(args.covariance_path);
    if (q_raw.rows() != grams.dim()) {
      throw ParseError("validate: covariance dimension does not match the channel");
    }
    HermitianMatrix q = [&]() -> HermitianMatrix {
      try {
        return HermitianMatrix(q_raw);
      } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("validate: ") + e.what());
      }
    }();

    KktReport report = kkt_residuals(grams, q, args.p_t);
    const bool ok = report.verified();
    out << std::setprecision(12)
        << "mu_estimate:               " << report.mu_est << "\n"
        << "stationarity_residual:     " << report.stationarity_residual << "\n"
        << "gradient_norm:             " << report.gradient.frobenius_norm() << "\n"
        << "dual_feasibility_residual: " << report.dual_feasibility_residual << "\n"
        << "primal_trace_residual:     " << report.primal_trace_residual << "\n"
        << "primal_psd_residual:       " << report.primal_psd_residual << "\n"
        << "verdict:                   " << (ok ? "verified" : "unverified") << "\n";
    return ok ? kExitOk : kExitUnverified;
  });
}

int cmd_compare(const CompareArgs& args, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&]() -> int {
    if (!(args.p_t > 0.0)) {
      throw std::invalid_argument("compare: --power must be positive");
    }
    const NumericPolicy policy = policy_from(args.tol_policy_path);
    ChannelFile file = load_channel_file(args.channel_path);
    GramPair grams = gram_pair(WiretapChannel(file.H, file.G));

    struct Row {
      std::string name;
      double capacity = 0.0;
      double micros = 0.0;
    };
    auto timed = [](const std::function<double()>& f, const std::string& name) -> Row {
      const auto start = std::chrono::steady_clock::now();
      const double value = f();
      const auto stop = std::chrono::steady_clock::now();
      return Row{name, value,
                 std::chrono::duration<double, std::micro>(stop - start).count()};
    };

    std::vector<Row> rows;
    rows.push_back(timed([&] { return solve(grams, args.p_t, policy).capacity_nats; },
                         "solver"));
    rows.push_back(timed(
        [&] { return solve_rank_one(grams, args.p_t, policy).capacity_nats; },
        "rank_one"));
    rows.push_back(timed(
        [&] {
          return projected_gradient_ascent(grams, args.p_t, AscentOptions{}, policy)
              .capacity_nats;
        },
        "oracle"));

    out << std::setprecision(12);
    out << "method      capacity_nats        wall_us\n";
    for (const Row& row : rows) {
      out << std::left << std::setw(12) << row.name << std::setw(21) << row.capacity
          << row.micros << "\n";
    }
    const double delta = std::abs(rows[0].capacity - rows[2].capacity);
    out << "solver_vs_oracle_delta: " << delta << (delta > 1e-4 ? "  (MISMATCH)" : "")
        << "\n"
        << "rank_one_vs_solver_delta: " << rows[0].capacity - rows[1].capacity << "\n";
    return kExitOk;
  });
}

}  // namespace wiretap::cli
