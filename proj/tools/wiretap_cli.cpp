// Command-line front end: secrecy capacity of a MIMO Gaussian wiretap
// channel under an average power constraint.

#include <iostream>

#include <CLI11.hpp>

#include "wiretap/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"MIMO Gaussian wiretap channel secrecy capacity"};
  app.require_subcommand(1);

  wiretap::cli::CapacityArgs cap_args;
  CLI::App* cap = app.add_subcommand(
      "capacity", "Secrecy capacity and optimal covariance for one power level");
  cap->add_option("file", cap_args.channel_path, "Channel JSON file")->required();
  cap->add_option("--power", cap_args.p_t, "Transmit power P_t")->required();
  cap->add_flag("--bits", cap_args.bits, "Report capacity in bits instead of nats");
  cap->add_option("--out", cap_args.out_path, "Write the optimal covariance as JSON");
  cap->add_option("--tol-policy", cap_args.tol_policy_path, "Tolerance overrides (JSON)");

  wiretap::cli::SweepArgs sweep_args;
  CLI::App* sweep = app.add_subcommand("sweep", "Capacity over a power or alpha grid (CSV)");
  sweep->add_option("file", sweep_args.channel_path, "Channel JSON file")->required();
  sweep->add_option("--sweep", sweep_args.sweep_spec, "Power grid p_min:p_max:points");
  sweep->add_option("--alpha-sweep", sweep_args.alpha_spec,
                    "Replace the eavesdropper Gram by alpha*I over a_min:a_max:points");
  sweep->add_option("--power", sweep_args.p_t, "Fixed power for the alpha sweep");
  sweep->add_flag("--rank-one", sweep_args.include_rank_one,
                  "Also compute the rank-one achievable rate");
  sweep->add_option("--out", sweep_args.out_path, "CSV output path (default stdout)");
  sweep->add_option("--tol-policy", sweep_args.tol_policy_path, "Tolerance overrides (JSON)");

  wiretap::cli::ValidateArgs val_args;
  CLI::App* val = app.add_subcommand("validate", "KKT residual check of a covariance");
  val->add_option("file", val_args.channel_path, "Channel JSON file")->required();
  val->add_option("--q", val_args.covariance_path, "Covariance JSON file")->required();
  val->add_option("--power", val_args.p_t, "Transmit power P_t")->required();
  val->add_option("--tol-policy", val_args.tol_policy_path, "Tolerance overrides (JSON)");

  wiretap::cli::CompareArgs cmp_args;
  CLI::App* cmp = app.add_subcommand("compare",
                                     "Closed form vs rank-one vs numerical oracle");
  cmp->add_option("file", cmp_args.channel_path, "Channel JSON file")->required();
  cmp->add_option("--power", cmp_args.p_t, "Transmit power P_t")->required();
  cmp->add_option("--tol-policy", cmp_args.tol_policy_path, "Tolerance overrides (JSON)");

  CLI11_PARSE(app, argc, argv);

  if (cap->parsed()) return wiretap::cli::cmd_capacity(cap_args, std::cout, std::cerr);
  if (sweep->parsed()) return wiretap::cli::cmd_sweep(sweep_args, std::cout, std::cerr);
  if (val->parsed()) return wiretap::cli::cmd_validate(val_args, std::cout, std::cerr);
  if (cmp->parsed()) return wiretap::cli::cmd_compare(cmp_args, std::cout, std::cerr);
  return wiretap::cli::kExitInputError;
}
