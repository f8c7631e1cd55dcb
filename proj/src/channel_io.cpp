#include "wiretap/channel_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace wiretap {

namespace {

using nlohmann::json;

Matrix parse_complex_matrix(const json& node, const std::string& name) {
  if (!node.is_array() || node.empty()) {
    throw ParseError(name + ": expected a non-empty 2-D array");
  }
  const std::size_t rows = node.size();
  std::size_t cols = 0;
  Matrix out;
  for (std::size_t i = 0; i < rows; ++i) {
    const json& row = node[i];
    if (!row.is_array() || row.empty()) {
      throw ParseError(name + ": row " + std::to_string(i) + " is not a non-empty array");
    }
    if (i == 0) {
      cols = row.size();
      out.resize(static_cast<Index>(rows), static_cast<Index>(cols));
    } else if (row.size() != cols) {
      throw ParseError(name + ": ragged rows (row " + std::to_string(i) + ")");
    }
    for (std::size_t j = 0; j < cols; ++j) {
      const json& entry = row[j];
      if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
          !entry[1].is_number()) {
        throw ParseError(name + ": entry (" + std::to_string(i) + "," + std::to_string(j) +
                         ") is not a [re, im] pair");
      }
      out(static_cast<Index>(i), static_cast<Index>(j)) =
          Complex(entry[0].get<double>(), entry[1].get<double>());
    }
  }
  if (!is_finite(out)) {
    throw ParseError(name + ": non-finite entries");
  }
  return out;
}

json complex_matrix_node(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) {
      row.push_back({m(i, j).real(), m(i, j).imag()});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

json parse_document(const std::string& text) {
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw ParseError("input is not a JSON object");
  }
  return doc;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("cannot open file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

ChannelFile parse_channel_json(const std::string& text) {
  json doc = parse_document(text);
  if (!doc.contains("H") || !doc.contains("G")) {
    throw ParseError("channel file must contain \"H\" and \"G\"");
  }
  ChannelFile out;
  out.H = parse_complex_matrix(doc["H"], "H");
  out.G = parse_complex_matrix(doc["G"], "G");
  if (out.H.cols() != out.G.cols()) {
    throw ParseError("H and G must have the same number of columns");
  }
  if (doc.contains("label")) {
    if (!doc["label"].is_string()) {
      throw ParseError("label must be a string");
    }
    out.label = doc["label"].get<std::string>();
  }
  return out;
}

ChannelFile load_channel_file(const std::string& path) {
  return parse_channel_json(read_file(path));
}

std::string channel_to_json(const ChannelFile& channel) {
  json doc;
  if (!channel.label.empty()) doc["label"] = channel.label;
  doc["H"] = complex_matrix_node(channel.H);
  doc["G"] = complex_matrix_node(channel.G);
  return doc.dump(2) + "\n";
}

Matrix parse_covariance_json(const std::string& text) {
  json doc = parse_document(text);
  if (!doc.contains("Q")) {
    throw ParseError("covariance file must contain \"Q\"");
  }
  Matrix q = parse_complex_matrix(doc["Q"], "Q");
  if (q.rows() != q.cols()) {
    throw ParseError("Q must be square");
  }
  return q;
}

Matrix load_covariance_file(const std::string& path) {
  return parse_covariance_json(read_file(path));
}

std::string covariance_to_json(const Matrix& q, const std::string& label) {
  json doc;
  if (!label.empty()) doc["label"] = label;
  doc["Q"] = complex_matrix_node(q);
  return doc.dump(2) + "\n";
}

void save_covariance_file(const std::string& path, const Matrix& q,
                          const std::string& label) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ParseError("cannot open file for writing: " + path);
  }
  out << covariance_to_json(q, label);
  if (!out) {
    throw ParseError("write failed: " + path);
  }
}

NumericPolicy load_policy_file(const std::string& path) {
  json doc = parse_document(read_file(path));
  NumericPolicy policy;
  auto read_double = [&](const char* key, double& field) {
    if (doc.contains(key)) {
      if (!doc[key].is_number()) throw ParseError(std::string(key) + " must be a number");
      field = doc[key].get<double>();
    }
  };
  read_double("psd_tol_scale", policy.psd_tol_scale);
  read_double("eig_one_tol", policy.eig_one_tol);
  read_double("class_tol_scale", policy.class_tol_scale);
  read_double("epsilon_reg", policy.epsilon_reg);
  read_double("trace_tol_scale", policy.trace_tol_scale);
  if (doc.contains("bisection_cap")) {
    if (!doc["bisection_cap"].is_number_integer()) {
      throw ParseError("bisection_cap must be an integer");
    }
    policy.bisection_cap = doc["bisection_cap"].get<int>();
  }
  return policy;
}

std::string format_double(double v) {
  char buf[40];
  auto result = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, result.ptr);
}

}  // namespace wiretap
