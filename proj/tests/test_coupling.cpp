#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ensemblelab/coupling.hpp"
#include "ensemblelab/parallel.hpp"
#include "ensemblelab/quadrature.hpp"

using namespace ensemblelab;

TEST_CASE("log_kn_exact closed forms") {
  // n=1, a1=1: K = Gamma(a2+1) / (a2 Gamma(a2)) = 1
  CHECK(log_kn_exact({2.0, 1, 1.0, 5.0}) == doctest::Approx(0.0).epsilon(1e-9));
  // n=1, a1=2, a2=10: K = Gamma(12) / (100 Gamma(10)) = 1.1
  CHECK(log_kn_exact({2.0, 1, 2.0, 10.0}) == doctest::Approx(std::log(1.1)).epsilon(1e-9));
  // n=2, beta=2, a1=2, a2=10: K = 1e-4 * 110 * 90 = 0.99
  CHECK(log_kn_exact({2.0, 2, 2.0, 10.0}) == doctest::Approx(std::log(0.99)).epsilon(1e-9));
  CHECK_THROWS_AS(log_kn_exact({2.0, 5, 2.0, 3.0}), ParameterError);
}

TEST_CASE("log_kn_asymptotic arithmetic") {
  CHECK(log_kn_asymptotic(2.0, 7, 1.0, 100.0) == 0.0);
  CHECK(log_kn_asymptotic(2.0, 10, 0.5, 1e4) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(log_kn_asymptotic(1.0, 8, 0.25, 1e5) == doctest::Approx(0.00768).epsilon(1e-12));
  CHECK_THROWS_AS(log_kn_asymptotic(2.0, 8, 0.0, 1e5), ParameterError);
  CHECK_THROWS_AS(log_kn_asymptotic(2.0, 8, 1.5, 1e5), ParameterError);
}

TEST_CASE("log_ln closed forms") {
  EnsembleParams p{2.0, 3, 4.0, 50.0};
  CHECK(*log_ln({0.0, 0.0, 0.0}, p) == doctest::Approx(0.0));
  // indicator: any coordinate above 2 a2 kills the factor
  CHECK(!log_ln({1.0, 1.0, 101.0}, p).has_value());
  // scalar case: n=1, mu=2, a2=4, p=1 -> 1 + 3 log(3/4)
  EnsembleParams scalar{2.0, 1, 1.0, 4.0};
  CHECK(scalar.p() == doctest::Approx(1.0));
  double v = *log_ln({2.0}, scalar);
  CHECK(v == doctest::Approx(1.0 + 3.0 * std::log(0.75)).epsilon(1e-12));
  CHECK(v == doctest::Approx(0.137016).epsilon(1e-4));
  CHECK_THROWS_AS(log_ln({-1.0}, p), ParameterError);
}

TEST_CASE("log_ln is Lipschitz away from the indicator boundary") {
  EnsembleParams p{2.0, 3, 4.0, 50.0};
  std::vector<double> mu{1.0, 2.0, 3.0};
  double base = *log_ln(mu, p);
  for (int i = 0; i < 3; ++i) {
    auto pert = mu;
    pert[i] += 1e-8;
    CHECK(std::fabs(*log_ln(pert, p) - base) < 1e-6);
  }
}

TEST_CASE("unit-mean identity at moderate scale") {
  EnsembleParams p{2.0, 5, 5.0, 1e5};
  RngStream s = RngStream::from_seed(101);
  TvEstimate est = estimate_tv(p, 20000, s, default_thread_count());
  CHECK(est.reps == 20000);
  CHECK(std::fabs(est.unit_mean_hat - 1.0) <= 3.0 * est.stderr_mean);
  CHECK(est.tv_hat >= 0.0);
  CHECK(est.tv_hat <= 2.0 + 3.0 * est.stderr_tv);
}

TEST_CASE("replica count precondition") {
  EnsembleParams p{2.0, 2, 2.0, 100.0};
  RngStream s = RngStream::from_seed(1);
  CHECK_THROWS_AS(estimate_tv(p, 50, s), ParameterError);
}

TEST_CASE("degenerate n = 1 case against 1-D quadrature") {
  // Jacobi(1, a2) scaled by 2 a2 has density (1/2)(1 - x/(2 a2))^{a2 - 1};
  // Laguerre with a = 1 is chi-square(2) = Exp(1/2). The TV estimator targets
  // the L1 distance between the two, computable by ordinary quadrature.
  const double a2 = 1e6;
  EnsembleParams p{2.0, 1, 1.0, a2};
  auto l1_integrand = [a2](double x) {
    double beta_density = 0.5 * std::exp((a2 - 1.0) * std::log1p(-x / (2.0 * a2)));
    double exp_density = 0.5 * std::exp(-0.5 * x);
    return std::fabs(beta_density - exp_density);
  };
  // the integrand is negligible beyond x = 60
  double l1 = adaptive_simpson(l1_integrand, 0.0, 60.0, 1e-12);
  CHECK(l1 < 0.01);

  RngStream s = RngStream::from_seed(202);
  TvEstimate est = estimate_tv(p, 100000, s, default_thread_count());
  CHECK(est.tv_hat < 0.01);
  CHECK(std::fabs(est.tv_hat - l1) < 3.0 * est.stderr_tv + 1e-4);
}

TEST_CASE("stirling gap shrinks along the regime sequence") {
  const double beta = 2.0, gamma = 0.5;
  double prev = std::numeric_limits<double>::infinity();
  for (int n : {8, 16, 32, 64}) {
    double a1 = std::ceil(n * beta / (2.0 * gamma));
    double a2 = std::pow(static_cast<double>(n), 5.0);
    double gap = std::fabs(log_kn_exact({beta, n, a1, a2}) -
                           log_kn_asymptotic(beta, n, gamma, a2));
    CHECK(gap <= prev + 1e-12);
    prev = gap;
  }
  CHECK(prev < 0.1);
}

TEST_CASE("regime ratios") {
  std::vector<EnsembleParams> seq;
  for (int k : {2, 4, 8}) {
    seq.push_back({2.0, k, static_cast<double>(k), std::pow(static_cast<double>(k), 5.0)});
  }
  auto reports = check_regime(seq, 0.5);
  for (std::size_t i = 0; i < seq.size(); ++i) {
    double k = seq[i].n;
    CHECK(reports[i].ratio_n == doctest::Approx(std::pow(k, -1.5)).epsilon(1e-12));
    CHECK(reports[i].gamma_hat == doctest::Approx(1.0));  // a1 = n beta / 2
    CHECK(reports[i].gamma_gap == doctest::Approx(0.5));
  }
  for (std::size_t i = 1; i < reports.size(); ++i) {
    CHECK(reports[i].ratio_n < reports[i - 1].ratio_n);
    CHECK(reports[i].ratio_a1 < reports[i - 1].ratio_a1);
  }

  // constant sequence stays constant
  std::vector<EnsembleParams> flat(3, EnsembleParams{2.0, 4, 8.0, 1e4});
  auto fr = check_regime(flat, 0.5);
  CHECK(fr[0].ratio_n == fr[2].ratio_n);
  CHECK(fr[0].ratio_a1 == fr[2].ratio_a1);
  CHECK(fr[0].gamma_hat == doctest::Approx(0.5));

  CHECK_THROWS_AS(check_regime({}, 0.5), ParameterError);
}

TEST_CASE("tv estimates are deterministic and thread-invariant") {
  EnsembleParams p{2.0, 4, 4.0, 1e4};
  RngStream s = RngStream::from_seed(77);
  TvEstimate a = estimate_tv(p, 500, s, 1);
  TvEstimate b = estimate_tv(p, 500, s, 4);
  CHECK(a.tv_hat == b.tv_hat);
  CHECK(a.unit_mean_hat == b.unit_mean_hat);
  CHECK(a.stderr_tv == b.stderr_tv);
}
