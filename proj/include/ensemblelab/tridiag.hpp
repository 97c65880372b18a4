#pragma once

// Symmetric tridiagonal eigenvalues by Sturm-sequence bisection, small dense
// symmetric eigenvalues by cyclic Jacobi rotations, and Gershgorin bounds.
// Values only; no eigenvectors.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "ensemblelab/common.hpp"

namespace ensemblelab {

struct SymTridiagonal {
  std::vector<double> diag;     // length n
  std::vector<double> offdiag;  // length n-1
};

// Chi-draw bidiagonal factor: eigenvalues of B*B^T realize the Laguerre law.
struct Bidiagonal {
  std::vector<double> diag;     // length n, entries >= 0
  std::vector<double> subdiag;  // length n-1, entries >= 0
};

// Sorted ascending eigenvalue vector with order-statistic access.
struct Spectrum {
  std::vector<double> values;  // ascending

  std::size_t size() const { return values.size(); }

  // k-th largest eigenvalue, 1-based: order(1) is the maximum.
  double order(std::size_t k) const {
    if (k < 1 || k > values.size()) {
      throw ParameterError("Spectrum::order: k out of range");
    }
    return values[values.size() - k];
  }
  double min() const { return values.front(); }
  double max() const { return values.back(); }
};

// B * B^T for lower-bidiagonal B: diag_i = x_i^2 + y_{i-1}^2, offdiag_i = x_i y_i.
inline SymTridiagonal gram_tridiagonal(const Bidiagonal& b) {
  const std::size_t n = b.diag.size();
  SymTridiagonal t;
  t.diag.resize(n);
  t.offdiag.resize(n > 0 ? n - 1 : 0);
  for (std::size_t i = 0; i < n; ++i) {
    double prev = (i == 0) ? 0.0 : b.subdiag[i - 1];
    t.diag[i] = b.diag[i] * b.diag[i] + prev * prev;
    if (i + 1 < n) t.offdiag[i] = b.diag[i] * b.subdiag[i];
  }
  return t;
}

// Row-sum interval containing every eigenvalue.
inline std::pair<double, double> gershgorin_interval(const SymTridiagonal& t) {
  const std::size_t n = t.diag.size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    double radius = 0.0;
    if (i > 0) radius += std::fabs(t.offdiag[i - 1]);
    if (i + 1 < n) radius += std::fabs(t.offdiag[i]);
    lo = std::min(lo, t.diag[i] - radius);
    hi = std::max(hi, t.diag[i] + radius);
  }
  return {lo, hi};
}

namespace detail {

// Number of eigenvalues of T strictly below x, from the signs of the LDL^T
// pivots. pivmin keeps the recurrence away from division by zero.
inline std::size_t sturm_count(const std::vector<double>& d, const std::vector<double>& e2,
                               double x, double pivmin) {
  std::size_t count = 0;
  double q = 1.0;
  const std::size_t n = d.size();
  for (std::size_t i = 0; i < n; ++i) {
    double sub = (i == 0) ? 0.0 : e2[i - 1] / q;
    q = d[i] - x - sub;
    if (std::fabs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
  }
  return count;
}

struct SturmWorkspace {
  std::vector<double> d;
  std::vector<double> e2;
  double lo = 0.0, hi = 0.0;
  double pivmin = 0.0;
  double tol = 0.0;
};

inline SturmWorkspace sturm_prepare(const SymTridiagonal& t) {
  SturmWorkspace w;
  w.d = t.diag;
  const std::size_t n = w.d.size();
  w.e2.resize(n > 0 ? n - 1 : 0);
  double scale = 0.0;
  for (double v : t.diag) scale = std::max(scale, std::fabs(v));
  for (double v : t.offdiag) scale = std::max(scale, std::fabs(v));
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double e = t.offdiag[i];
    // entries below 1e-14 * scale are deflated to exact zero
    if (std::fabs(e) <= 1e-14 * scale) e = 0.0;
    w.e2[i] = e * e;
  }
  auto [lo, hi] = gershgorin_interval(t);
  w.lo = lo;
  w.hi = hi;
  double radius = std::max(std::fabs(lo), std::fabs(hi));
  // bisect essentially to machine precision relative to the spectral radius;
  // well inside the 1e-10 * max(1, radius) contract
  w.tol = std::max(1e-13, radius * 8.0 * std::numeric_limits<double>::epsilon());
  double emax = 0.0;
  for (double v : w.e2) emax = std::max(emax, v);
  w.pivmin = std::max(emax, 1.0) * std::numeric_limits<double>::min() * 1e10;
  return w;
}

// Bisect for the eigenvalue of 0-based ascending index j.
inline double sturm_eigenvalue(const SturmWorkspace& w, std::size_t j) {
  double lo = w.lo, hi = w.hi;
  while (hi - lo > w.tol) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sturm_count(w.d, w.e2, mid, w.pivmin) > j) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

inline void validate_tridiagonal(const SymTridiagonal& t) {
  if (t.diag.empty() || t.offdiag.size() + 1 != t.diag.size()) {
    throw ParameterError("SymTridiagonal: inconsistent lengths");
  }
  for (double v : t.diag) {
    if (!std::isfinite(v)) throw ParameterError("SymTridiagonal: non-finite entry");
  }
  for (double v : t.offdiag) {
    if (!std::isfinite(v)) throw ParameterError("SymTridiagonal: non-finite entry");
  }
}

// All eigenvalues, each to absolute accuracy 1e-10 * max(1, spectral radius).
inline Spectrum eigenvalues(const SymTridiagonal& t) {
  validate_tridiagonal(t);
  auto w = detail::sturm_prepare(t);
  const std::size_t n = t.diag.size();
  Spectrum s;
  s.values.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    s.values[j] = detail::sturm_eigenvalue(w, j);
  }
  std::sort(s.values.begin(), s.values.end());
  return s;
}

// The k largest eigenvalues, descending. Cheaper than a full solve when the
// matrix is large and only an edge is needed.
inline std::vector<double> eigenvalues_largest(const SymTridiagonal& t, std::size_t k) {
  validate_tridiagonal(t);
  const std::size_t n = t.diag.size();
  if (k < 1 || k > n) throw ParameterError("eigenvalues_largest: k out of range");
  auto w = detail::sturm_prepare(t);
  std::vector<double> out(k);
  for (std::size_t j = 0; j < k; ++j) {
    out[j] = detail::sturm_eigenvalue(w, n - 1 - j);
  }
  return out;
}

// The k smallest eigenvalues, ascending.
inline std::vector<double> eigenvalues_smallest(const SymTridiagonal& t, std::size_t k) {
  validate_tridiagonal(t);
  const std::size_t n = t.diag.size();
  if (k < 1 || k > n) throw ParameterError("eigenvalues_smallest: k out of range");
  auto w = detail::sturm_prepare(t);
  std::vector<double> out(k);
  for (std::size_t j = 0; j < k; ++j) {
    out[j] = detail::sturm_eigenvalue(w, j);
  }
  return out;
}

// Dense symmetric storage, row-major.
struct DenseSym {
  std::size_t n = 0;
  std::vector<double> a;  // n*n

  double& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
  double at(std::size_t i, std::size_t j) const { return a[i * n + j]; }

  static DenseSym zero(std::size_t n) {
    DenseSym m;
    m.n = n;
    m.a.assign(n * n, 0.0);
    return m;
  }
};

// Full spectrum of a small dense symmetric matrix by cyclic two-sided Jacobi
// rotations. Capped at n <= 256; asymmetry beyond 1e-12 * scale is rejected.
inline Spectrum eigenvalues_dense(const DenseSym& m) {
  const std::size_t n = m.n;
  if (n == 0 || m.a.size() != n * n) throw ParameterError("eigenvalues_dense: bad shape");
  if (n > 256) throw ParameterError("eigenvalues_dense: n > 256");
  double scale = 0.0;
  for (double v : m.a) scale = std::max(scale, std::fabs(v));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::fabs(m.at(i, j) - m.at(j, i)) > 1e-12 * std::max(1.0, scale)) {
        throw ParameterError("eigenvalues_dense: input not symmetric");
      }
    }
  }

  std::vector<double> a = m.a;
  auto idx = [n](std::size_t i, std::size_t j) { return i * n + j; };
  const int max_sweeps = 64;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += a[idx(p, q)] * a[idx(p, q)];
    }
    if (std::sqrt(off) <= 1e-13 * std::max(1.0, scale)) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double apq = a[idx(p, q)];
        if (std::fabs(apq) <= 1e-300) continue;
        double theta = (a[idx(q, q)] - a[idx(p, p)]) / (2.0 * apq);
        double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          double akp = a[idx(k, p)], akq = a[idx(k, q)];
          a[idx(k, p)] = c * akp - s * akq;
          a[idx(k, q)] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double apk = a[idx(p, k)], aqk = a[idx(q, k)];
          a[idx(p, k)] = c * apk - s * aqk;
          a[idx(q, k)] = s * apk + c * aqk;
        }
      }
    }
  }

  Spectrum spec;
  spec.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) spec.values[i] = a[idx(i, i)];
  std::sort(spec.values.begin(), spec.values.end());
  return spec;
}

}  // namespace ensemblelab
