#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ensemblelab/rng.hpp"

using namespace ensemblelab;

TEST_CASE("stream determinism and splittability") {
  RngStream a = RngStream::from_seed(42).child(0, "role");
  RngStream b = RngStream::from_seed(42).child(0, "role");
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  RngStream c = RngStream::from_seed(42).child(0, "role");
  RngStream d = RngStream::from_seed(42).child(1, "role");
  RngStream e = RngStream::from_seed(42).child(0, "other");
  int distinct_cd = 0, distinct_ce = 0;
  for (int i = 0; i < 100; ++i) {
    uint64_t vc = c.next_u64();
    if (vc != d.next_u64()) ++distinct_cd;
    if (vc != e.next_u64()) ++distinct_ce;
  }
  CHECK(distinct_cd == 100);
  CHECK(distinct_ce == 100);
}

TEST_CASE("uniforms stay strictly inside (0,1)") {
  RngStream s = RngStream::from_seed(7);
  for (int i = 0; i < 100000; ++i) {
    double u = s.next_uniform();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("gaussian mean and variance") {
  RngStream s = RngStream::from_seed(1);
  const int n = 1000000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    double x = sample_gaussian(s);
    sum += x;
    sum2 += x * x;
  }
  double mean = sum / n;
  double var = sum2 / n - mean * mean;
  CHECK(std::fabs(mean) < 3.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::fabs(var - 1.0) < 3.0 * std::sqrt(2.0 / n));
}

TEST_CASE("chi-square mean, s = 3") {
  RngStream s = RngStream::from_seed(2);
  const int n = 1000000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    double x = sample_chi({3.0}, s);
    CHECK(x >= 0.0);
    sum += x * x;
  }
  double stderr_mc = std::sqrt(6.0 / n);  // var of chi^2(3) is 6
  CHECK(std::fabs(sum / n - 3.0) < 3.0 * stderr_mc);
}

TEST_CASE("chi mean, s = 2: sqrt(2) Gamma(1.5) / Gamma(1)") {
  // independent evaluation via high-precision log-gamma
  double expected = std::sqrt(2.0) * std::exp(std::lgamma(1.5) - std::lgamma(1.0));
  CHECK(expected == doctest::Approx(1.2533141373155).epsilon(1e-10));
  RngStream s = RngStream::from_seed(3);
  const int n = 1000000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += sample_chi({2.0}, s);
  double var = 2.0 - expected * expected;
  CHECK(std::fabs(sum / n - expected) < 3.0 * std::sqrt(var / n));
}

TEST_CASE("non-integer dof is supported") {
  RngStream s = RngStream::from_seed(4);
  const int n = 400000;
  double dof = 2.7;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    double x = sample_chi({dof}, s);
    sum += x * x;
  }
  CHECK(std::fabs(sum / n - dof) < 3.0 * std::sqrt(2.0 * dof / n));
}

TEST_CASE("parameter errors") {
  RngStream s = RngStream::from_seed(5);
  CHECK_THROWS_AS(sample_chi({0.0}, s), ParameterError);
  CHECK_THROWS_AS(sample_chi({-1.0}, s), ParameterError);
  CHECK_THROWS_AS(sample_gamma(-1.0, 1.0, s), ParameterError);
  CHECK_THROWS_AS(gamma_tail(0.0, 2.0, 1.0), ParameterError);
  CHECK_THROWS_AS(gamma_tail(1.0, -2.0, 1.0), ParameterError);
  CHECK_THROWS_AS(gamma_tail(1.0, 2.0, -1.0), ParameterError);
}

TEST_CASE("gamma_tail closed forms") {
  // P(chi^2(2) >= 2) = e^{-1}
  CHECK(gamma_tail(1.0, 2.0, 2.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-10));
  // b = 0 gives probability one
  CHECK(gamma_tail(3.7, 0.9, 0.0) == 1.0);
  // P(chi^2(1) >= 2) = erfc(1)
  CHECK(gamma_tail(0.5, 2.0, 2.0) == doctest::Approx(std::erfc(1.0)).epsilon(1e-10));
}

TEST_CASE("gamma tail increases in the shape parameter") {
  for (double b : {0.5, 2.0, 7.0}) {
    double prev = -1.0;
    for (double shape = 0.5; shape <= 10.0; shape += 0.5) {
      double q = gamma_tail(shape, 2.0, b);
      CHECK(q > prev);
      prev = q;
    }
  }
}

TEST_CASE("chi-square draws match the gamma_tail-implied CDF") {
  for (double s : {1.0, 2.0, 7.5}) {
    RngStream stream = RngStream::from_seed(17).child(static_cast<uint64_t>(10 * s), "ks");
    const int n = 100000;
    std::vector<double> draws(n);
    for (int i = 0; i < n; ++i) draws[i] = sample_chi_square({s}, stream);
    std::sort(draws.begin(), draws.end());
    double d = 0.0;
    for (int i = 0; i < n; ++i) {
      double f = chi_square_cdf(s, draws[i]);
      d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
      d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
    }
    CHECK(d < 0.01);
  }
}
