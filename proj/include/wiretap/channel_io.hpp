#pragma once

#include <string>

#include "wiretap/types.hpp"

namespace wiretap {

/// Malformed or inconsistent input document.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// On-disk channel description: JSON object with "H" and "G" as 2-D arrays
/// of [re, im] pairs and an optional "label". Rows must be rectangular and
/// the two matrices must agree on the column count.
struct ChannelFile {
  Matrix H;
  Matrix G;
  std::string label;
};

ChannelFile parse_channel_json(const std::string& text);
ChannelFile load_channel_file(const std::string& path);
std::string channel_to_json(const ChannelFile& channel);

/// Covariance document: JSON object with "Q" as a 2-D array of [re, im]
/// pairs (square) and an optional "label".
Matrix parse_covariance_json(const std::string& text);
Matrix load_covariance_file(const std::string& path);
std::string covariance_to_json(const Matrix& q, const std::string& label = "");
void save_covariance_file(const std::string& path, const Matrix& q,
                          const std::string& label = "");

/// Tolerance overrides: JSON object with any subset of the NumericPolicy
/// fields by name; missing fields keep their defaults.
NumericPolicy load_policy_file(const std::string& path);

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

}  // namespace wiretap
