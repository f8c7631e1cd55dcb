#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "test_support.hpp"
#include "wiretap/channel_io.hpp"
#include "wiretap/cli.hpp"

using namespace wiretap;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("wiretap_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string file(const std::string& name, const std::string& contents) const {
    const fs::path p = path / name;
    std::ofstream out(p, std::ios::binary);
    out << contents;
    return p.string();
  }
};

std::string run_capacity(const cli::CapacityArgs& args, int expect_code) {
  std::ostringstream out, err;
  const int code = cli::cmd_capacity(args, out, err);
  CHECK(code == expect_code);
  return out.str();
}

double parse_field(const std::string& text, const std::string& key) {
  const auto pos = text.find(key);
  REQUIRE(pos != std::string::npos);
  std::istringstream in(text.substr(pos + key.size()));
  double value = 0.0;
  in >> value;
  return value;
}

}  // namespace

TEST_CASE("channel file round trip") {
  ChannelFile f = load_channel_file(testing::data_path("example_a.json"));
  CHECK(f.H.rows() == 3);
  CHECK(f.H.cols() == 2);
  CHECK(f.G.rows() == 2);
  CHECK(f.H(0, 0) == Complex(0.32, -0.52));
  CHECK_FALSE(f.label.empty());

  ChannelFile back = parse_channel_json(channel_to_json(f));
  CHECK((back.H - f.H).norm() == 0.0);
  CHECK((back.G - f.G).norm() == 0.0);
  CHECK(back.label == f.label);
}

TEST_CASE("channel parse errors") {
  CHECK_THROWS_AS(parse_channel_json("not json at all"), ParseError);
  CHECK_THROWS_AS(parse_channel_json(R"({"H": [[[1,0]]]})"), ParseError);
  // Ragged rows.
  CHECK_THROWS_AS(
      parse_channel_json(
          R"({"H": [[[1,0],[0,0]],[[1,0]]], "G": [[[1,0],[0,0]]]})"),
      ParseError);
  // Column mismatch between H and G.
  CHECK_THROWS_AS(
      parse_channel_json(R"({"H": [[[1,0]]], "G": [[[1,0],[0,0]]]})"),
      ParseError);
  // Entry that is not a [re, im] pair.
  CHECK_THROWS_AS(parse_channel_json(R"({"H": [[1]], "G": [[1]]})"), ParseError);
}

TEST_CASE("covariance file round trip") {
  Matrix q(2, 2);
  q << Complex(1.5, 0), Complex(0.25, -0.5), Complex(0.25, 0.5), Complex(0.5, 0);
  Matrix back = parse_covariance_json(covariance_to_json(q, "test"));
  CHECK((back - q).norm() == 0.0);
  CHECK_THROWS_AS(parse_covariance_json(R"({"Q": [[[1,0],[0,0]]]})"), ParseError);
}

TEST_CASE("format_double round trips") {
  testing::Rng rng(501);
  for (int i = 0; i < 200; ++i) {
    const double x = rng.normal() * std::pow(10.0, i % 17 - 8);
    CHECK(std::stod(format_double(x)) == x);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(2.0) == "2");
}

TEST_CASE("capacity command end to end") {
  cli::CapacityArgs args;
  args.channel_path = testing::data_path("example_a.json");
  args.p_t = 5.0;
  std::string out = run_capacity(args, cli::kExitOk);
  CHECK(out.find("FullRankClosedForm") != std::string::npos);
  CHECK(out.find("full_rank_valid:  true") != std::string::npos);
  CHECK(out.find("kkt_verified:     true") != std::string::npos);
  const double nats = parse_field(out, "capacity:");
  CHECK(nats == doctest::Approx(0.9952485521553285).epsilon(1e-8));

  args.bits = true;
  std::string bits_out = run_capacity(args, cli::kExitOk);
  const double bits = parse_field(bits_out, "capacity:");
  CHECK(bits == doctest::Approx(nats / std::log(2.0)).epsilon(1e-10));
}

TEST_CASE("capacity command on an identical-channel file reports zero") {
  TempDir tmp;
  const std::string path = tmp.file("same.json", R"({
    "H": [[[1,0],[0,0]],[[0,0],[1,0]]],
    "G": [[[1,0],[0,0]],[[0,0],[1,0]]]
  })");
  cli::CapacityArgs args;
  args.channel_path = path;
  args.p_t = 3.0;
  std::string out = run_capacity(args, cli::kExitOk);
  CHECK(parse_field(out, "capacity:") == 0.0);
  CHECK(out.find("ZeroCapacity") != std::string::npos);
}

TEST_CASE("capacity command rejects malformed files with exit 2") {
  TempDir tmp;
  const std::string path =
      tmp.file("ragged.json", R"({"H": [[[1,0],[0,0]],[[1,0]]], "G": [[[1,0],[0,0]]]})");
  cli::CapacityArgs args;
  args.channel_path = path;
  args.p_t = 1.0;
  std::ostringstream out, err;
  CHECK(cli::cmd_capacity(args, out, err) == cli::kExitInputError);
  CHECK_FALSE(err.str().empty());
}

TEST_CASE("sweep command CSV output, transition, determinism") {
  TempDir tmp;
  cli::SweepArgs args;
  args.channel_path = testing::data_path("example_a.json");
  args.sweep_spec = "0.5:10:20";
  args.include_rank_one = true;

  std::ostringstream out1, out2, err;
  REQUIRE(cli::cmd_sweep(args, out1, err) == cli::kExitOk);
  REQUIRE(cli::cmd_sweep(args, out2, err) == cli::kExitOk);
  CHECK(out1.str() == out2.str());

  std::istringstream csv(out1.str());
  std::string header;
  std::getline(csv, header);
  CHECK(header == "p_t,capacity_nats,rank_one_nats,method,full_rank_valid,rank,mu");

  int transitions = 0;
  bool prev_valid = false;
  bool first = true;
  double prev_p = 0.0, prev_cap = -1.0;
  std::string line;
  while (std::getline(csv, line)) {
    std::istringstream row(line);
    std::string p_s, cap_s, r1_s, method, valid_s;
    std::getline(row, p_s, ',');
    std::getline(row, cap_s, ',');
    std::getline(row, r1_s, ',');
    std::getline(row, method, ',');
    std::getline(row, valid_s, ',');
    const double p = std::stod(p_s);
    const double cap = std::stod(cap_s);
    const double r1 = std::stod(r1_s);
    const bool valid = valid_s == "true";
    if (!first) {
      CHECK(p > prev_p);
      CHECK(cap >= prev_cap - 1e-8);
      if (valid != prev_valid) {
        ++transitions;
        CHECK(valid);  // only false -> true
      }
    }
    CHECK(cap >= r1 - 1e-8);
    prev_p = p;
    prev_cap = cap;
    prev_valid = valid;
    first = false;
  }
  CHECK(transitions == 1);

  // Same sweep to a file is byte-identical with the stream output.
  args.out_path = (tmp.path / "sweep.csv").string();
  std::ostringstream out3;
  REQUIRE(cli::cmd_sweep(args, out3, err) == cli::kExitOk);
  std::ifstream written(args.out_path, std::ios::binary);
  std::stringstream file_contents;
  file_contents << written.rdbuf();
  CHECK(file_contents.str() == out1.str());
}

TEST_CASE("sweep command rejects an unwritable output path") {
  cli::SweepArgs args;
  args.channel_path = testing::data_path("example_a.json");
  args.sweep_spec = "1:2:3";
  args.out_path = "/nonexistent-dir/sweep.csv";
  std::ostringstream out, err;
  CHECK(cli::cmd_sweep(args, out, err) == cli::kExitInputError);
}

TEST_CASE("alpha sweep stays below the point-to-point capacity") {
  cli::SweepArgs args;
  args.channel_path = testing::data_path("example_b.json");
  args.alpha_spec = "0:1.9:8";
  args.p_t = 20.0;
  std::ostringstream out, err;
  REQUIRE(cli::cmd_sweep(args, out, err) == cli::kExitOk);
  std::istringstream csv(out.str());
  std::string header;
  std::getline(csv, header);
  CHECK(header == "alpha,capacity_nats,p2p_capacity_nats,method,full_rank_valid,rank,mu");
  std::string line;
  double first_gap = -1.0;
  double prev_gap = -1.0;
  while (std::getline(csv, line)) {
    std::istringstream row(line);
    std::string a_s, cap_s, p2p_s;
    std::getline(row, a_s, ',');
    std::getline(row, cap_s, ',');
    std::getline(row, p2p_s, ',');
    const double cap = std::stod(cap_s);
    const double p2p = std::stod(p2p_s);
    CHECK(cap <= p2p + 1e-9);
    const double gap = p2p - cap;
    if (first_gap < 0) {
      first_gap = gap;
    } else {
      CHECK(gap >= prev_gap - 1e-9);  // gap grows with alpha
    }
    prev_gap = gap;
  }
  // alpha = 0 collapses to the point-to-point problem.
  CHECK(first_gap == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("validate round trip on solver output") {
  TempDir tmp;
  cli::CapacityArgs cap_args;
  cap_args.channel_path = testing::data_path("example_a.json");
  cap_args.p_t = 5.0;
  cap_args.out_path = (tmp.path / "q.json").string();
  run_capacity(cap_args, cli::kExitOk);

  cli::ValidateArgs val_args;
  val_args.channel_path = cap_args.channel_path;
  val_args.covariance_path = cap_args.out_path;
  val_args.p_t = 5.0;
  std::ostringstream out, err;
  CHECK(cli::cmd_validate(val_args, out, err) == cli::kExitOk);
  CHECK(out.str().find("verdict:                   verified") != std::string::npos);

  // Feeding the verdict back a second time is stable.
  std::ostringstream out2, err2;
  CHECK(cli::cmd_validate(val_args, out2, err2) == cli::kExitOk);
  CHECK(out2.str() == out.str());
}

TEST_CASE("validate rejects uniform power and the zero matrix") {
  TempDir tmp;
  cli::ValidateArgs args;
  args.channel_path = testing::data_path("example_a.json");
  args.p_t = 5.0;

  args.covariance_path = tmp.file(
      "uniform.json", R"({"Q": [[[2.5,0],[0,0]],[[0,0],[2.5,0]]]})");
  std::ostringstream out, err;
  CHECK(cli::cmd_validate(args, out, err) == cli::kExitUnverified);
  CHECK(out.str().find("unverified") != std::string::npos);

  args.covariance_path =
      tmp.file("zero.json", R"({"Q": [[[0,0],[0,0]],[[0,0],[0,0]]]})");
  std::ostringstream out2, err2;
  CHECK(cli::cmd_validate(args, out2, err2) == cli::kExitUnverified);
  CHECK(parse_field(out2.str(), "primal_trace_residual:") == doctest::Approx(5.0));
}

TEST_CASE("validate rejects a non-Hermitian covariance with exit 2") {
  TempDir tmp;
  cli::ValidateArgs args;
  args.channel_path = testing::data_path("example_a.json");
  args.p_t = 5.0;
  args.covariance_path = tmp.file(
      "skew.json", R"({"Q": [[[1,0],[1,1]],[[0,0],[1,0]]]})");
  std::ostringstream out, err;
  CHECK(cli::cmd_validate(args, out, err) == cli::kExitInputError);
}

TEST_CASE("compare command") {
  cli::CompareArgs args;
  args.channel_path = testing::data_path("example_a.json");
  args.p_t = 10.0;
  std::ostringstream out, err;
  REQUIRE(cli::cmd_compare(args, out, err) == cli::kExitOk);
  CHECK(out.str().find("MISMATCH") == std::string::npos);
  const double delta = parse_field(out.str(), "solver_vs_oracle_delta:");
  CHECK(delta <= 1e-5);
  const double gap = parse_field(out.str(), "rank_one_vs_solver_delta:");
  CHECK(gap > 0.0);  // rank-one is strictly below the capacity here

  // Scalar channel: every method coincides.
  TempDir tmp;
  cli::CompareArgs scalar;
  scalar.channel_path = tmp.file("scalar.json", R"({"H": [[[2,0]]], "G": [[[1,0]]]})");
  scalar.p_t = 3.0;
  std::ostringstream sout, serr;
  REQUIRE(cli::cmd_compare(scalar, sout, serr) == cli::kExitOk);
  CHECK(parse_field(sout.str(), "solver_vs_oracle_delta:") <= 1e-6);
  CHECK(std::abs(parse_field(sout.str(), "rank_one_vs_solver_delta:")) <= 1e-6);

  // Dominated channel: all methods report zero.
  cli::CompareArgs dominated;
  dominated.channel_path =
      tmp.file("dominated.json",
               R"({"H": [[[1,0],[0,0]],[[0,0],[1,0]]],
                   "G": [[[2,0],[0,0]],[[0,0],[2,0]]]})");
  dominated.p_t = 4.0;
  std::ostringstream dout, derr;
  REQUIRE(cli::cmd_compare(dominated, dout, derr) == cli::kExitOk);
  CHECK(parse_field(dout.str(), "solver_vs_oracle_delta:") == 0.0);
}

TEST_CASE("policy file overrides") {
  TempDir tmp;
  const std::string path =
      tmp.file("policy.json", R"({"eig_one_tol": 1e-6, "bisection_cap": 64})");
  NumericPolicy policy = load_policy_file(path);
  CHECK(policy.eig_one_tol == 1e-6);
  CHECK(policy.bisection_cap == 64);
  CHECK(policy.psd_tol_scale == NumericPolicy::defaults().psd_tol_scale);

  CHECK_THROWS_AS(load_policy_file(tmp.file("bad.json", R"({"eig_one_tol": "x"})")),
                  ParseError);
}
