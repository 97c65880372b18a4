#pragma once

// Counter-based, splittable random variate generation: every stream is a
// pure function of (seed, path), so replicas reproduce bit-exactly no
// matter how work is scheduled across threads.

#include <cmath>
#include <cstdint>
#include <string_view>

#include "ensemblelab/common.hpp"

namespace ensemblelab {

namespace detail {

// SplitMix64 finalizer: a bijective 64-bit mix.
inline uint64_t mix64(uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

inline uint64_t fnv1a(std::string_view s) {
  uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

inline constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

}  // namespace detail

// Degrees of freedom for chi / chi-square draws; non-integer dof allowed.
struct ChiSpec {
  double dof;
};

// A keyed counter stream. The key is derived from (seed, path); the i-th
// output is mix(key + i * golden), so the sequence never depends on thread
// count or call interleaving elsewhere.
class RngStream {
 public:
  static RngStream from_seed(uint64_t seed) {
    RngStream s;
    s.key_ = detail::mix64(seed ^ 0xD2B74407B1CE6E93ULL);
    return s;
  }

  // Derive an independent substream identified by (replica, role).
  RngStream child(uint64_t replica, std::string_view role) const {
    RngStream s;
    uint64_t tag = detail::mix64(replica * 0x8CB92BA72F3D8DD7ULL ^ detail::fnv1a(role));
    s.key_ = detail::mix64(key_ ^ tag ^ 0xA5A5A5A5A5A5A5A5ULL);
    return s;
  }

  uint64_t next_u64() {
    ++counter_;
    return detail::mix64(key_ + counter_ * detail::kGolden);
  }

  // Uniform draw strictly inside (0, 1).
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  uint64_t key() const { return key_; }
  uint64_t counter() const { return counter_; }

 private:
  uint64_t key_ = 0;
  uint64_t counter_ = 0;
};

// Standard normal via the Marsaglia polar method. One value per call; the
// rejection loop consumes a deterministic number of uniforms per stream.
inline double sample_gaussian(RngStream& stream) {
  for (;;) {
    double u = 2.0 * stream.next_uniform() - 1.0;
    double v = 2.0 * stream.next_uniform() - 1.0;
    double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) {
      return u * std::sqrt(-2.0 * std::log(s) / s);
    }
  }
}

// Gamma(shape, scale) via Marsaglia-Tsang; valid for every shape > 0
// (shapes below 1 are boosted through Gamma(shape+1) * U^{1/shape}).
inline double sample_gamma(double shape, double scale, RngStream& stream) {
  if (!(shape > 0.0) || !(scale > 0.0)) {
    throw ParameterError("sample_gamma: shape and scale must be positive");
  }
  double boost = 1.0;
  double a = shape;
  if (a < 1.0) {
    boost = std::pow(stream.next_uniform(), 1.0 / a);
    a += 1.0;
  }
  const double d = a - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = sample_gaussian(stream);
    double t = 1.0 + c * x;
    if (t <= 0.0) continue;
    double v = t * t * t;
    double u = stream.next_uniform();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) {
      return boost * d * v * scale;
    }
  }
}

// chi(s): the positive square root of a chi-square(s) draw.
inline double sample_chi(ChiSpec spec, RngStream& stream) {
  if (!(spec.dof > 0.0)) {
    throw ParameterError("sample_chi: dof must be positive");
  }
  return std::sqrt(sample_gamma(spec.dof / 2.0, 2.0, stream));
}

inline double sample_chi_square(ChiSpec spec, RngStream& stream) {
  if (!(spec.dof > 0.0)) {
    throw ParameterError("sample_chi_square: dof must be positive");
  }
  return sample_gamma(spec.dof / 2.0, 2.0, stream);
}

namespace detail {

// Regularized lower incomplete gamma P(a, x) by its power series.
inline double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  double ap = a;
  for (int i = 0; i < 1000; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma Q(a, x) by Lentz continued fraction.
inline double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace detail

// P(X >= b) for X ~ Gamma(shape, scale). Series/continued-fraction split at
// the usual shape+1 crossover keeps the absolute error below 1e-10 everywhere.
inline double gamma_tail(double shape, double scale, double b) {
  if (!(shape > 0.0) || !(scale > 0.0) || !(b >= 0.0)) {
    throw ParameterError("gamma_tail: need shape > 0, scale > 0, b >= 0");
  }
  if (b == 0.0) return 1.0;
  double x = b / scale;
  if (x < shape + 1.0) {
    return 1.0 - detail::gamma_p_series(shape, x);
  }
  return detail::gamma_q_cf(shape, x);
}

// CDF of chi-square(s), used by distributional sanity checks.
inline double chi_square_cdf(double dof, double x) {
  if (x <= 0.0) return 0.0;
  return 1.0 - gamma_tail(dof / 2.0, 2.0, x);
}

}  // namespace ensemblelab
