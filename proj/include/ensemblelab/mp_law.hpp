#pragma once

// Marchenko-Pastur limit law: density, CDF, moments, and the linear
// rescaling x -> scale_c * x that appears in the Jacobi bulk limit.

#include <algorithm>
#include <cmath>

#include "ensemblelab/common.hpp"
#include "ensemblelab/quadrature.hpp"

namespace ensemblelab {

struct MPLaw {
  double gamma = 1.0;    // in (0, 1]
  double scale_c = 1.0;  // density is scale_c * f_gamma(scale_c * x)

  MPLaw() = default;
  explicit MPLaw(double gamma_, double scale_c_ = 1.0) : gamma(gamma_), scale_c(scale_c_) {
    if (!(gamma > 0.0) || gamma > 1.0) throw ParameterError("MPLaw: gamma must be in (0,1]");
    if (!(scale_c > 0.0)) throw ParameterError("MPLaw: scale_c must be positive");
  }

  double gamma_min() const {
    double s = std::sqrt(gamma);
    return (1.0 - s) * (1.0 - s);
  }
  double gamma_max() const {
    double s = std::sqrt(gamma);
    return (1.0 + s) * (1.0 + s);
  }
  // support of the scaled law
  double support_lo() const { return gamma_min() / scale_c; }
  double support_hi() const { return gamma_max() / scale_c; }
};

inline double density(const MPLaw& law, double x) {
  double y = law.scale_c * x;
  double lo = law.gamma_min(), hi = law.gamma_max();
  if (y <= lo || y >= hi) return 0.0;
  return law.scale_c * std::sqrt((y - lo) * (hi - y)) / (2.0 * M_PI * law.gamma * y);
}

// CDF by quadrature after the substitution y = midpoint + radius * sin(theta),
// which absorbs the square-root edge behavior (and the x^{-1/2} spike at
// gamma = 1) into a smooth integrand.
inline double cdf(const MPLaw& law, double x) {
  double y = law.scale_c * x;
  double lo = law.gamma_min(), hi = law.gamma_max();
  if (y <= lo) return 0.0;
  if (y >= hi) return 1.0;
  double mid = 0.5 * (lo + hi);
  double rad = 0.5 * (hi - lo);
  double theta_x = std::asin(std::clamp((y - mid) / rad, -1.0, 1.0));
  double g = law.gamma;
  auto integrand = [mid, rad, g](double theta) {
    double s = std::sin(theta);
    double yy = mid + rad * s;
    // at gamma = 1 the lower edge sits at 0; there cos^2/yy -> (1 - s)/mid
    if (yy <= 0.0) return rad * rad * (1.0 - s) / (2.0 * M_PI * g * mid);
    return rad * rad * (1.0 - s) * (1.0 + s) / (2.0 * M_PI * g * yy);
  };
  double v = adaptive_simpson(integrand, -M_PI / 2.0, theta_x, 1e-10);
  return std::clamp(v, 0.0, 1.0);
}

// i-th moment of the unscaled MP law:
// sum_{r=0}^{i-1} binom(i,r) binom(i-1,r) gamma^r / (r+1).
inline double moment(double gamma, int i) {
  if (i < 1) throw ParameterError("moment: i must be >= 1");
  auto binom = [](int n, int k) {
    double v = 1.0;
    for (int j = 0; j < k; ++j) v = v * static_cast<double>(n - j) / static_cast<double>(j + 1);
    return v;
  };
  double sum = 0.0;
  double gpow = 1.0;
  for (int r = 0; r < i; ++r) {
    sum += binom(i, r) * binom(i - 1, r) * gpow / static_cast<double>(r + 1);
    gpow *= gamma;
  }
  return sum;
}

}  // namespace ensemblelab
