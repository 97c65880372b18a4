#pragma once

// Empirical-measure statistics and the scalings behind the bulk, CLT, and
// edge limits: KS and W1 distances, centered power sums, soft/hard edge
// statistics, the large-n Laguerre hard-edge oracle, and the discretized
// stochastic Airy spectrum.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "ensemblelab/common.hpp"
#include "ensemblelab/ensembles.hpp"
#include "ensemblelab/mp_law.hpp"
#include "ensemblelab/rng.hpp"
#include "ensemblelab/tridiag.hpp"

namespace ensemblelab {

// Equal-weight point masses, atoms kept sorted.
struct EmpiricalMeasure {
  std::vector<double> atoms;

  EmpiricalMeasure() = default;
  explicit EmpiricalMeasure(std::vector<double> values) : atoms(std::move(values)) {
    std::sort(atoms.begin(), atoms.end());
  }

  std::size_t size() const { return atoms.size(); }
};

inline EmpiricalMeasure scale_measure(const Spectrum& spec, double factor) {
  if (!(factor > 0.0)) throw ParameterError("scale_measure: factor must be positive");
  std::vector<double> atoms(spec.values.size());
  for (std::size_t i = 0; i < atoms.size(); ++i) atoms[i] = factor * spec.values[i];
  return EmpiricalMeasure(std::move(atoms));
}

// One-sample KS statistic: sup over atoms of |empirical CDF - law CDF|, with
// both CDFs evaluated right-continuously at the atom. For a law sharing the
// measure's own steps this is exactly zero; for continuous laws it is the
// usual upper-side statistic.
template <typename Cdf>
double ks_distance_cdf(const EmpiricalMeasure& emp, const Cdf& cdf_fn) {
  const std::size_t n = emp.atoms.size();
  if (n == 0) throw ParameterError("ks_distance: empty measure");
  double d = 0.0;
  std::size_t i = 0;
  while (i < n) {
    double x = emp.atoms[i];
    while (i < n && emp.atoms[i] == x) ++i;  // ties share one CDF value
    d = std::max(d, std::fabs(static_cast<double>(i) / n - cdf_fn(x)));
  }
  return d;
}

inline double ks_distance(const EmpiricalMeasure& emp, const MPLaw& law) {
  return ks_distance_cdf(emp, [&law](double x) { return cdf(law, x); });
}

// Classical two-sample KS by a merge sweep over both sorted atom lists.
inline double ks_two_sample(const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
  const std::size_t na = a.atoms.size(), nb = b.atoms.size();
  if (na == 0 || nb == 0) throw ParameterError("ks_two_sample: empty measure");
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < na || j < nb) {
    double x = (j >= nb || (i < na && a.atoms[i] <= b.atoms[j])) ? a.atoms[i] : b.atoms[j];
    // consume every atom tied at x on both sides before comparing the CDFs
    while (i < na && a.atoms[i] == x) ++i;
    while (j < nb && b.atoms[j] == x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

// 1-D W1 distance via the sorted (optimal) coupling; equal atom counts only.
inline double wasserstein1(const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
  if (a.atoms.size() != b.atoms.size() || a.atoms.empty()) {
    throw ParameterError("wasserstein1: measures must have equal nonzero atom counts");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.atoms.size(); ++i) {
    sum += std::fabs(a.atoms[i] - b.atoms[i]);
  }
  return sum / a.atoms.size();
}

enum class CltScaling { laguerre, jacobi };

// Centered i-th power sum: the CLT statistic X_i. Laguerre spectra scale by
// gamma/(n beta), Jacobi spectra by c a2 / n; both center at n * moment(gamma, i).
inline double clt_stat(const Spectrum& spec, const EnsembleParams& params, int i,
                       CltScaling scaling) {
  if (i < 1) throw ParameterError("clt_stat: i must be >= 1");
  const double gamma = params.gamma_hat();
  const double factor = (scaling == CltScaling::laguerre)
                            ? gamma / (params.n * params.beta)
                            : params.c() * params.a2 / params.n;
  double sum = 0.0;
  for (double lam : spec.values) sum += std::pow(factor * lam, i);
  return sum - params.n * moment(gamma, i);
}

struct EdgeScalings {
  double m_n = 0.0;
  double sigma_n = 0.0;
};

// m_n = (sqrt(n) + sqrt(2 a1 / beta))^2,
// sigma_n = (2 n a1 / beta)^{1/6} / (sqrt(n) + sqrt(2 a1 / beta))^{4/3}.
inline EdgeScalings edge_scalings(const EnsembleParams& params) {
  double root_n = std::sqrt(static_cast<double>(params.n));
  double root_b = std::sqrt(2.0 * params.a1 / params.beta);
  EdgeScalings e;
  e.m_n = (root_n + root_b) * (root_n + root_b);
  e.sigma_n = std::pow(2.0 * params.n * params.a1 / params.beta, 1.0 / 6.0) /
              std::pow(root_n + root_b, 4.0 / 3.0);
  return e;
}

// sigma_n ((2 a2 / beta) lambda^{(l)} - m_n): the soft-edge fluctuation scale.
inline double soft_edge_statistic(const Spectrum& spec, const EnsembleParams& params, int l) {
  if (l < 1 || static_cast<std::size_t>(l) > spec.size()) {
    throw ParameterError("soft_edge_statistic: l out of range");
  }
  EdgeScalings e = edge_scalings(params);
  return e.sigma_n * ((2.0 * params.a2 / params.beta) * spec.order(l) - e.m_n);
}

// (2 / beta) n a2 lambda^{(n-k+1)}: the k-th smallest eigenvalue on the
// hard-edge scale.
inline double hard_edge_statistic(const Spectrum& spec, const EnsembleParams& params, int k) {
  if (k < 1 || static_cast<std::size_t>(k) > spec.size()) {
    throw ParameterError("hard_edge_statistic: k out of range");
  }
  return (2.0 / params.beta) * params.n * params.a2 * spec.values[k - 1];
}

// Approximate draws of the hard-edge limits (Lambda_0, ..., Lambda_{k-1})(beta, c):
// the k smallest Laguerre eigenvalues at a1 = beta (n_large + c) / 2, scaled
// by n_large / beta. Output ascending.
inline std::vector<double> hard_edge_oracle(double beta, double c, int k, int n_large,
                                            RngStream& stream) {
  if (n_large < 100) throw ParameterError("hard_edge_oracle: n_large must be >= 100");
  if (k < 1 || k > n_large) throw ParameterError("hard_edge_oracle: k out of range");
  EnsembleParams params{beta, n_large, beta * (n_large + c) / 2.0, 0.0};
  SymTridiagonal t = laguerre_tridiagonal(params, stream);
  std::vector<double> small = eigenvalues_smallest(t, static_cast<std::size_t>(k));
  for (double& v : small) v *= static_cast<double>(n_large) / beta;
  return small;
}

// Uniform grid [0, L] with Dirichlet ends; interior nodes j h, j = 1..L/h - 1.
struct AiryGrid {
  double step_h = 1e-2;
  double cutoff_L = 10.0;

  int interior_nodes() const {
    double ratio = cutoff_L / step_h;
    long long n = std::llround(ratio);
    if (std::fabs(ratio - n) > 1e-9 || n < 10) {
      throw ParameterError("AiryGrid: L/h must be an integer >= 10");
    }
    return static_cast<int>(n) - 1;
  }
};

// k largest eigenvalues (descending) of the discretized operator
// d^2/dx^2 - x - (2/sqrt(beta)) b', with white noise entering as
// independent N(0, 1/h) diagonal perturbations. beta = +infinity turns the
// noise off and recovers the deterministic Airy problem.
inline std::vector<double> sample_airy_spectrum(double beta, int k, const AiryGrid& grid,
                                                RngStream& stream) {
  if (!(beta > 0.0)) throw ParameterError("sample_airy_spectrum: beta must be positive");
  const int m = grid.interior_nodes();
  if (k < 1 || k > m) throw ParameterError("sample_airy_spectrum: need 1 <= k <= L/h - 1");
  const double h = grid.step_h;
  const double inv_h2 = 1.0 / (h * h);
  const double noise_coef = std::isinf(beta) ? 0.0 : (2.0 / std::sqrt(beta)) / std::sqrt(h);

  SymTridiagonal t;
  t.diag.resize(m);
  t.offdiag.assign(m - 1, inv_h2);
  for (int j = 0; j < m; ++j) {
    double x = (j + 1) * h;
    double noise = noise_coef != 0.0 ? noise_coef * sample_gaussian(stream) : 0.0;
    t.diag[j] = -2.0 * inv_h2 - x - noise;
  }
  return eigenvalues_largest(t, static_cast<std::size_t>(k));
}

}  // namespace ensemblelab
