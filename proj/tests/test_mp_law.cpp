#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ensemblelab/mp_law.hpp"
#include "ensemblelab/quadrature.hpp"

using namespace ensemblelab;

namespace {

// Independent moment oracle: integrate x^i f_gamma(x) with the density
// written out from scratch, on the arcsine-substituted axis so the
// square-root edges are smooth.
double moment_by_quadrature(double gamma, int i) {
  double s = std::sqrt(gamma);
  double lo = (1.0 - s) * (1.0 - s), hi = (1.0 + s) * (1.0 + s);
  double mid = 0.5 * (lo + hi), rad = 0.5 * (hi - lo);
  auto f = [=](double theta) {
    double st = std::sin(theta);
    double x = mid + rad * st;
    // x = 0 only at the gamma = 1 lower edge, where the i >= 1 integrand vanishes
    if (x <= 0.0) return 0.0;
    return std::pow(x, i - 1) * rad * rad * (1.0 - st) * (1.0 + st) / (2.0 * M_PI * gamma);
  };
  return adaptive_simpson(f, -M_PI / 2.0, M_PI / 2.0, 1e-12);
}

// Brute-force midpoint Riemann CDF, 10^7 cells, no substitution tricks.
double cdf_by_riemann(double gamma, double x) {
  double s = std::sqrt(gamma);
  double lo = (1.0 - s) * (1.0 - s), hi = (1.0 + s) * (1.0 + s);
  const long cells = 10000000;
  double h = (std::min(x, hi) - lo) / cells;
  double sum = 0.0;
  for (long k = 0; k < cells; ++k) {
    double t = lo + (k + 0.5) * h;
    sum += std::sqrt((t - lo) * (hi - t)) / (2.0 * M_PI * gamma * t);
  }
  return sum * h;
}

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(MPLaw(0.0), ParameterError);
  CHECK_THROWS_AS(MPLaw(1.5), ParameterError);
  CHECK_THROWS_AS(MPLaw(0.5, -1.0), ParameterError);
  CHECK_THROWS_AS(moment(0.5, 0), ParameterError);
}

TEST_CASE("support endpoints") {
  MPLaw law(0.25);
  CHECK(law.gamma_min() == doctest::Approx(0.25));
  CHECK(law.gamma_max() == doctest::Approx(2.25));
  MPLaw scaled(0.25, 2.0);
  CHECK(scaled.support_lo() == doctest::Approx(0.125));
  CHECK(scaled.support_hi() == doctest::Approx(1.125));
}

TEST_CASE("density closed forms") {
  MPLaw one(1.0);
  CHECK(density(one, 2.0) == doctest::Approx(1.0 / (2.0 * M_PI)).epsilon(1e-12));
  CHECK(density(one, 4.0) == 0.0);
  CHECK(density(one, -0.5) == 0.0);
  MPLaw half(0.5);
  CHECK(density(half, half.gamma_min()) == 0.0);
  CHECK(density(half, half.gamma_max()) == 0.0);
  // hand evaluation at the support midpoint of gamma = 0.5
  double lo = half.gamma_min(), hi = half.gamma_max();
  double x = 0.5 * (lo + hi);
  double expected = std::sqrt((x - lo) * (hi - x)) / (2.0 * M_PI * 0.5 * x);
  CHECK(density(half, x) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("cdf endpoints and closed form at gamma = 1") {
  MPLaw one(1.0);
  CHECK(cdf(one, 0.0) == 0.0);
  CHECK(cdf(one, 4.0) == 1.0);
  CHECK(cdf(one, 10.0) == 1.0);
  // with x = 4 sin^2(theta) the half-mass integral evaluates to (pi + 2)/(2 pi)
  CHECK(cdf(one, 2.0) == doctest::Approx((M_PI + 2.0) / (2.0 * M_PI)).epsilon(1e-9));
}

TEST_CASE("cdf against a 1e7-cell Riemann sum, gamma = 0.5") {
  MPLaw half(0.5);
  for (double x : {0.5, 1.0, 1.7, 2.5}) {
    CHECK(std::fabs(cdf(half, x) - cdf_by_riemann(0.5, x)) < 1e-6);
  }
}

TEST_CASE("total mass is one") {
  for (double g : {0.1, 0.5, 1.0}) {
    MPLaw law(g);
    double total = adaptive_simpson(
        [&](double theta) {
          double mid = 0.5 * (law.gamma_min() + law.gamma_max());
          double rad = 0.5 * (law.gamma_max() - law.gamma_min());
          double st = std::sin(theta);
          double x = mid + rad * st;
          if (x <= 0.0) return rad * rad * (1.0 - st) / (2.0 * M_PI * g * mid);
          return rad * rad * (1.0 - st) * (1.0 + st) / (2.0 * M_PI * g * x);
        },
        -M_PI / 2.0, M_PI / 2.0, 1e-12);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(cdf(law, law.support_hi() * (1.0 - 1e-12)) == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("moment closed forms") {
  CHECK(moment(0.3, 1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(moment(1.0, 1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(moment(0.5, 2) == doctest::Approx(1.5).epsilon(1e-14));
  // gamma = 1 gives the Catalan numbers
  CHECK(moment(1.0, 2) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(moment(1.0, 3) == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(moment(1.0, 4) == doctest::Approx(14.0).epsilon(1e-14));
  CHECK(moment(1.0, 5) == doctest::Approx(42.0).epsilon(1e-14));
}

TEST_CASE("moments match quadrature, i <= 5") {
  for (double g : {0.25, 1.0}) {
    for (int i = 1; i <= 5; ++i) {
      CHECK(moment(g, i) == doctest::Approx(moment_by_quadrature(g, i)).epsilon(1e-6));
    }
  }
}

TEST_CASE("scaled law shifts mass by 1/c") {
  MPLaw law(0.5, 4.0);
  // mean of the scaled law is moment/c
  double mean = adaptive_simpson([&](double x) { return x * density(law, x); },
                                 law.support_lo(), law.support_hi(), 1e-10);
  CHECK(mean == doctest::Approx(moment(0.5, 1) / 4.0).epsilon(1e-5));
  // cdf of the scaled law equals the unscaled cdf at c x
  MPLaw plain(0.5);
  CHECK(cdf(law, 0.3) == doctest::Approx(cdf(plain, 1.2)).epsilon(1e-9));
}
