#pragma once

#include <iosfwd>
#include <string>

#include "wiretap/types.hpp"

namespace wiretap::cli {

/// Exit codes shared by all commands.
inline constexpr int kExitOk = 0;          // success / verified
inline constexpr int kExitUnverified = 1;  // validate: KKT thresholds not met
inline constexpr int kExitInputError = 2;  // parse / precondition problems
inline constexpr int kExitNumerical = 3;   // numerical failure

struct CapacityArgs {
  std::string channel_path;
  double p_t = 0.0;
  bool bits = false;
  std::string out_path;         // optional: write the optimal Q as JSON
  std::string tol_policy_path;  // optional NumericPolicy overrides
};

struct SweepArgs {
  std::string channel_path;
  std::string sweep_spec;       // "p_min:p_max:points" power sweep
  std::string alpha_spec;       // "a_min:a_max:points" eavesdropper-level sweep
  double p_t = 20.0;            // fixed power for the alpha sweep
  bool include_rank_one = false;
  std::string out_path;         // optional: CSV file instead of stdout
  std::string tol_policy_path;
};

struct ValidateArgs {
  std::string channel_path;
  std::string covariance_path;
  double p_t = 0.0;
  std::string tol_policy_path;
};

struct CompareArgs {
  std::string channel_path;
  double p_t = 0.0;
  std::string tol_policy_path;
};

/// Solve one instance and print capacity, method, rank, validity and KKT
/// verification status.
int cmd_capacity(const CapacityArgs& args, std::ostream& out, std::ostream& err);

/// Power sweep (CSV: p_t,capacity_nats,rank_one_nats,method,full_rank_valid,
/// rank,mu) or, with alpha_spec set, an eavesdropper-level sweep at fixed
/// power against the point-to-point capacity.
int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err);

/// KKT residual report for a user-supplied covariance.
int cmd_validate(const ValidateArgs& args, std::ostream& out, std::ostream& err);

/// Closed form vs rank-one vs ascent oracle on one instance, with timings
/// and pairwise deltas.
int cmd_compare(const CompareArgs& args, std::ostream& out, std::ostream& err);

}  // namespace wiretap::cli
