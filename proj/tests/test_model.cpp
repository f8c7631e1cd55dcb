#include <doctest.h>

#include "test_support.hpp"
#include "wiretap/model.hpp"

using namespace wiretap;
using wiretap::testing::Rng;

TEST_CASE("gram_pair basics") {
  WiretapChannel ch(Matrix::Identity(2, 2), Matrix::Zero(2, 2));
  GramPair g = gram_pair(ch);
  CHECK((g.A.mat() - Matrix::Identity(2, 2)).norm() == 0.0);
  CHECK(g.B.frobenius_norm() == 0.0);

  CHECK_THROWS_AS(WiretapChannel(Matrix::Identity(2, 2), Matrix::Identity(3, 3)),
                  std::invalid_argument);
}

TEST_CASE("gram_pair of the bundled examples has a positive definite difference") {
  for (const char* name : {"example_a.json", "example_b.json"}) {
    GramPair g = testing::load_example(name);
    DifferenceClass cls = classify_difference(g);
    CHECK(cls.kind == DifferenceKind::PositiveDefinite);
    CHECK(cls.m == g.dim());
  }
  // Frozen spectra of A - B for the two examples.
  DifferenceClass a = classify_difference(testing::example_a());
  CHECK(a.eigen.values[0] == doctest::Approx(1.213942038515).epsilon(1e-9));
  CHECK(a.eigen.values[1] == doctest::Approx(0.091357961485).epsilon(1e-9));
  DifferenceClass b = classify_difference(testing::example_b());
  CHECK(b.eigen.values[0] == doctest::Approx(3.767860097904).epsilon(1e-9));
  CHECK(b.eigen.values[2] == doctest::Approx(0.563105857732).epsilon(1e-9));
}

TEST_CASE("random Grams are PSD within tolerance") {
  Rng rng(201);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 1 + static_cast<Index>(trial % 4);
    Matrix h = rng.complex_gaussian(n + 1, n);
    GramPair g = gram_pair(WiretapChannel(h, rng.complex_gaussian(n, n)));
    EigDecomposition eig = hermitian_eig(g.A);
    CHECK(eig.values.minCoeff() >= -1e-10 * std::max(1.0, eig.values.maxCoeff()));
  }
}

TEST_CASE("secrecy_rate zero cases") {
  GramPair g = testing::example_a();
  CHECK(secrecy_rate(g, HermitianMatrix::Zero(2)) == 0.0);

  Rng rng(202);
  Matrix h = rng.complex_gaussian(3, 3);
  GramPair same = gram_pair(WiretapChannel(h, h));
  for (int trial = 0; trial < 5; ++trial) {
    CHECK(secrecy_rate(same, rng.covariance(3, 2.0)) ==
          doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("secrecy_rate matches the receiver-side determinant form") {
  Rng rng(203);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 1 + static_cast<Index>(trial % 4);
    Matrix h = rng.complex_gaussian(1 + static_cast<Index>(trial % 3) + n, n);
    Matrix g = rng.complex_gaussian(n, n);
    WiretapChannel ch(h, g);
    GramPair grams = gram_pair(ch);
    HermitianMatrix q = rng.covariance(n, 1.0 + (trial % 7));
    const double via_grams = secrecy_rate(grams, q);
    const double via_channels = testing::direct_rate(h, g, q);
    CHECK(via_grams == doctest::Approx(via_channels).epsilon(1e-10));
  }
}

TEST_CASE("secrecy_rate rejects indefinite covariance") {
  RealVector d(2);
  d << 1.0, -0.5;
  CHECK_THROWS_AS(secrecy_rate(testing::example_a(), HermitianMatrix::FromDiagonal(d)),
                  std::invalid_argument);
}

namespace {

GramPair diagonal_pair(std::initializer_list<double> a, std::initializer_list<double> b) {
  RealVector va(static_cast<Index>(a.size())), vb(static_cast<Index>(b.size()));
  Index i = 0;
  for (double v : a) va[i++] = v;
  i = 0;
  for (double v : b) vb[i++] = v;
  return GramPair(HermitianMatrix::FromDiagonal(va), HermitianMatrix::FromDiagonal(vb));
}

}  // namespace

TEST_CASE("classify_difference kinds and m") {
  DifferenceClass pd = classify_difference(diagonal_pair({2, 3}, {1, 1}));
  CHECK(pd.kind == DifferenceKind::PositiveDefinite);
  CHECK(pd.m == 2);

  DifferenceClass ps = classify_difference(diagonal_pair({2, 1}, {1, 1}));
  CHECK(ps.kind == DifferenceKind::PsdSingular);
  CHECK(ps.m == 1);

  DifferenceClass in = classify_difference(diagonal_pair({2, 0}, {1, 1}));
  CHECK(in.kind == DifferenceKind::Indefinite);
  CHECK(in.m == 1);

  DifferenceClass ns = classify_difference(diagonal_pair({1, 1}, {2, 2}));
  CHECK(ns.kind == DifferenceKind::NegativeSemidefinite);
  CHECK(ns.m == 0);

  // Equal Grams: the zero difference is negative semidefinite, not singular.
  DifferenceClass zero = classify_difference(diagonal_pair({1, 1}, {1, 1}));
  CHECK(zero.kind == DifferenceKind::NegativeSemidefinite);
  CHECK(zero.m == 0);
}

TEST_CASE("classification is scale consistent") {
  Rng rng(204);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = 2 + static_cast<Index>(trial % 3);
    GramPair g(rng.psd(n), rng.psd(n));
    DifferenceClass base = classify_difference(g);
    for (double c : {1e-6, 1e-3, 10.0, 1e6}) {
      GramPair scaled(HermitianMatrix(c * g.A.mat()), HermitianMatrix(c * g.B.mat()));
      DifferenceClass s = classify_difference(scaled);
      CHECK(s.kind == base.kind);
      CHECK(s.m == base.m);
    }
  }
}

TEST_CASE("spectral_summary scalar-per-direction case") {
  GramPair g = diagonal_pair({2, 2}, {1, 1});
  SpectralSummary s = spectral_summary(g);
  CHECK(s.gamma[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(s.gamma[1] == doctest::Approx(2.0).epsilon(1e-12));
  REQUIRE(s.log_term.has_value());
  CHECK(*s.log_term == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("spectral_summary with a blind eavesdropper direction") {
  GramPair g = diagonal_pair({2, 2}, {0, 0});
  SpectralSummary s = spectral_summary(g);
  CHECK(std::isinf(s.gamma[0]));
  CHECK(std::isinf(s.gamma[1]));
  CHECK_FALSE(s.log_term.has_value());

  CHECK_THROWS_AS(spectral_summary(diagonal_pair({1, 1}, {2, 2})), std::invalid_argument);
}

TEST_CASE("spectral_summary gammas equal the (A, B) pencil eigenvalues") {
  Rng rng(205);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = 1 + static_cast<Index>(trial % 4);
    HermitianMatrix b(rng.psd(n).mat() + 0.1 * Matrix::Identity(n, n));
    HermitianMatrix a(b.mat() + rng.psd(n).mat() + 0.1 * Matrix::Identity(n, n));
    GramPair g(a, b);
    SpectralSummary s = spectral_summary(g);

    HermitianMatrix b_isqrt = psd_sqrt(b, true);
    Matrix w = b_isqrt.mat() * a.mat() * b_isqrt.mat();
    EigDecomposition pencil = hermitian_eig(HermitianMatrix(0.5 * (w + w.adjoint())));

    RealVector gammas = s.gamma;
    std::sort(gammas.data(), gammas.data() + gammas.size(), std::greater<double>());
    for (Index i = 0; i < n; ++i) {
      CHECK(gammas[i] ==
            doctest::Approx(pencil.values[i]).epsilon(1e-8));
    }
  }
}

TEST_CASE("example-b summary matches the frozen generalized eigenvalues") {
  SpectralSummary s = spectral_summary(testing::example_b());
  RealVector gammas = s.gamma;
  std::sort(gammas.data(), gammas.data() + gammas.size());
  CHECK(gammas[0] == doctest::Approx(1.300913475089).epsilon(1e-9));
  CHECK(gammas[1] == doctest::Approx(2.457693063240).epsilon(1e-9));
  CHECK(gammas[2] == doctest::Approx(6.264643943508).epsilon(1e-9));
  REQUIRE(s.log_term.has_value());
  CHECK(*s.log_term == doctest::Approx(2.9972115757298745).epsilon(1e-9));
}
