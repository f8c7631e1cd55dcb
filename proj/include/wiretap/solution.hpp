#pragma once

#include <map>
#include <optional>
#include <string>

#include "wiretap/linalg.hpp"

namespace wiretap {

enum class Method {
  FullRankClosedForm,
  ReducedEquivalent,
  RankOne,
  WaterFilling,
  ZeroCapacity,
  NumericalOracle,
};

const char* to_string(Method method);

/// A solved instance: optimal covariance, capacity in nats, and how it was
/// obtained. For methods with a power multiplier, mu holds the value that
/// meets the trace constraint. When full_rank_valid is false the closed
/// form is not the optimum; such a Solution is diagnostic only and the
/// dispatcher replaces it with an oracle solution.
struct Solution {
  HermitianMatrix Q;
  double capacity_nats = 0.0;
  int rank = 0;
  std::optional<double> mu;
  Method method = Method::ZeroCapacity;
  bool full_rank_valid = false;
  std::map<std::string, double> diagnostics;
};

}  // namespace wiretap
