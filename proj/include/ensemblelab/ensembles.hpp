#pragma once

// Spectra from the beta-Laguerre density (chi bidiagonal model) and the
// beta-Jacobi density (Gaussian matrix model for beta in {1,2}, random-walk
// Metropolis on logit coordinates for general beta).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

#include "ensemblelab/common.hpp"
#include "ensemblelab/rng.hpp"
#include "ensemblelab/tridiag.hpp"

namespace ensemblelab {

struct EnsembleParams {
  double beta = 2.0;
  int n = 1;
  double a1 = 1.0;
  double a2 = 1.0;  // unused for Laguerre

  double p() const { return 1.0 + 0.5 * beta * (n - 1); }
  double gamma_hat() const { return n * beta / (2.0 * a1); }
  double c() const { return 2.0 * gamma_hat() / beta; }

  void validate_laguerre() const {
    if (!(beta > 0.0) || n < 1) throw ParameterError("EnsembleParams: beta > 0, n >= 1 required");
    if (!(a1 > 0.5 * beta * (n - 1))) {
      throw ParameterError("EnsembleParams: need a1 > (beta/2)(n-1)");
    }
  }
  void validate_jacobi() const {
    validate_laguerre();
    if (!(a2 > 0.5 * beta * (n - 1))) {
      throw ParameterError("EnsembleParams: need a2 > (beta/2)(n-1)");
    }
  }
};

// Chi-entry bidiagonal realization of the Laguerre ensemble with a = a1:
// diag chi_{2a}, chi_{2a-beta}, ..., chi_{2a-beta(n-1)};
// subdiag chi_{beta(n-1)}, ..., chi_{beta}.
inline Bidiagonal laguerre_bidiagonal(const EnsembleParams& params, RngStream& stream) {
  params.validate_laguerre();
  const int n = params.n;
  Bidiagonal b;
  b.diag.resize(n);
  b.subdiag.resize(n - 1);
  for (int i = 0; i < n; ++i) {
    b.diag[i] = sample_chi({2.0 * params.a1 - params.beta * i}, stream);
  }
  for (int i = 0; i < n - 1; ++i) {
    b.subdiag[i] = sample_chi({params.beta * (n - 1 - i)}, stream);
  }
  return b;
}

inline SymTridiagonal laguerre_tridiagonal(const EnsembleParams& params, RngStream& stream) {
  return gram_tridiagonal(laguerre_bidiagonal(params, stream));
}

inline Spectrum sample_laguerre(const EnsembleParams& params, RngStream& stream) {
  return eigenvalues(laguerre_tridiagonal(params, stream));
}

// Log of the Jacobi density at lambda, normalizer included via log-gamma.
// Returns -infinity when a coordinate leaves (0,1) or coordinates coincide.
inline double log_density_jacobi(const std::vector<double>& lambda, const EnsembleParams& params) {
  params.validate_jacobi();
  const int n = params.n;
  if (static_cast<int>(lambda.size()) != n) {
    throw ParameterError("log_density_jacobi: dimension mismatch");
  }
  const double neg_inf = -std::numeric_limits<double>::infinity();
  for (double x : lambda) {
    if (!(x > 0.0) || !(x < 1.0)) return neg_inf;
  }
  const double beta = params.beta, a1 = params.a1, a2 = params.a2, p = params.p();

  double log_c = 0.0;
  for (int j = 1; j <= n; ++j) {
    double off = 0.5 * beta * (n - j);
    log_c += std::lgamma(1.0 + 0.5 * beta) + std::lgamma(a1 + a2 - off) -
             std::lgamma(1.0 + 0.5 * beta * j) - std::lgamma(a1 - off) - std::lgamma(a2 - off);
  }

  double interaction = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double diff = std::fabs(lambda[i] - lambda[j]);
      if (diff == 0.0) return neg_inf;
      interaction += std::log(diff);
    }
  }

  double body = 0.0;
  for (double x : lambda) {
    body += (a1 - p) * std::log(x) + (a2 - p) * std::log1p(-x);
  }
  return log_c + beta * interaction + body;
}

namespace detail {

// Complex matrices carried as a real/imag pair; re symmetric and im
// antisymmetric whenever the matrix is Hermitian.
struct ComplexDense {
  std::size_t n = 0;
  std::vector<std::complex<double>> a;

  std::complex<double>& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
  std::complex<double> at(std::size_t i, std::size_t j) const { return a[i * n + j]; }

  static ComplexDense zero(std::size_t n) {
    ComplexDense m;
    m.n = n;
    m.a.assign(n * n, {0.0, 0.0});
    return m;
  }
};

// Real Wishart W_n(m, I) = G^T G. Above 4n degrees of freedom the explicit
// Gaussian matrix is replaced by the Bartlett triangular factorization,
// which has the identical law at O(n^2) draws instead of O(mn).
inline DenseSym wishart_real(int m, int n, RngStream& stream) {
  DenseSym w = DenseSym::zero(n);
  if (m <= 4 * n) {
    std::vector<double> g(static_cast<std::size_t>(m) * n);
    for (auto& v : g) v = sample_gaussian(stream);
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int r = 0; r < m; ++r) s += g[r * n + i] * g[r * n + j];
        w.at(i, j) = s;
        w.at(j, i) = s;
      }
    }
    return w;
  }
  // lower-triangular A with chi diagonal, normal subdiagonal; W = A A^T
  std::vector<double> a(static_cast<std::size_t>(n) * n, 0.0);
  for (int j = 0; j < n; ++j) {
    a[j * n + j] = sample_chi({static_cast<double>(m - j)}, stream);
    for (int i = j + 1; i < n; ++i) a[i * n + j] = sample_gaussian(stream);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k <= i; ++k) s += a[i * n + k] * a[j * n + k];
      w.at(i, j) = s;
      w.at(j, i) = s;
    }
  }
  return w;
}

// Complex Wishart with E|entry|^2 = 1 (entries (x+iy)/sqrt(2)).
inline ComplexDense wishart_complex(int m, int n, RngStream& stream) {
  ComplexDense w = ComplexDense::zero(n);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  if (m <= 4 * n) {
    std::vector<std::complex<double>> z(static_cast<std::size_t>(m) * n);
    for (auto& v : z) {
      v = {sample_gaussian(stream) * inv_sqrt2, sample_gaussian(stream) * inv_sqrt2};
    }
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        std::complex<double> s{0.0, 0.0};
        for (int r = 0; r < m; ++r) s += std::conj(z[r * n + i]) * z[r * n + j];
        w.at(i, j) = s;
        w.at(j, i) = std::conj(s);
      }
    }
    return w;
  }
  std::vector<std::complex<double>> a(static_cast<std::size_t>(n) * n, {0.0, 0.0});
  for (int j = 0; j < n; ++j) {
    a[j * n + j] = {sample_chi({2.0 * (m - j)}, stream) * inv_sqrt2, 0.0};
    for (int i = j + 1; i < n; ++i) {
      a[i * n + j] = {sample_gaussian(stream) * inv_sqrt2,
                      sample_gaussian(stream) * inv_sqrt2};
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      std::complex<double> s{0.0, 0.0};
      for (int k = 0; k <= std::min(i, j); ++k) s += a[i * n + k] * std::conj(a[j * n + k]);
      w.at(i, j) = s;
      w.at(j, i) = std::conj(s);
    }
  }
  return w;
}

// Hermitian C -> [[Re, -Im], [Im, Re]], real symmetric with doubled spectrum.
inline DenseSym realify(const ComplexDense& c) {
  const std::size_t n = c.n;
  DenseSym m = DenseSym::zero(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double re = c.at(i, j).real(), im = c.at(i, j).imag();
      m.at(i, j) = re;
      m.at(n + i, n + j) = re;
      m.at(i, n + j) = -im;
      m.at(n + i, j) = im;
    }
  }
  return m;
}

// Lower Cholesky factor of a symmetric positive definite matrix.
inline std::vector<double> cholesky_lower(const DenseSym& s) {
  const std::size_t n = s.n;
  std::vector<double> l(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double sum = s.at(i, j);
      for (std::size_t k = 0; k < j; ++k) sum -= l[i * n + k] * l[j * n + k];
      if (i == j) {
        if (!(sum > 0.0)) throw NumericalError("cholesky: matrix not positive definite");
        l[i * n + i] = std::sqrt(sum);
      } else {
        l[i * n + j] = sum / l[j * n + j];
      }
    }
  }
  return l;
}

// M = L^{-1} W L^{-T}; symmetric when W is.
inline DenseSym whiten(const DenseSym& w, const std::vector<double>& l) {
  const std::size_t n = w.n;
  // X = L^{-1} W (forward solve on each column of W)
  std::vector<double> x(n * n);
  for (std::size_t col = 0; col < n; ++col) {
    for (std::size_t i = 0; i < n; ++i) {
      double sum = w.at(i, col);
      for (std::size_t k = 0; k < i; ++k) sum -= l[i * n + k] * x[k * n + col];
      x[i * n + col] = sum / l[i * n + i];
    }
  }
  // M = X L^{-T}: forward solve on each row of X
  DenseSym m = DenseSym::zero(n);
  for (std::size_t row = 0; row < n; ++row) {
    for (std::size_t j = 0; j < n; ++j) {
      double sum = x[row * n + j];
      for (std::size_t k = 0; k < j; ++k) sum -= l[j * n + k] * m.at(row, k);
      m.at(row, j) = sum / l[j * n + j];
    }
  }
  // symmetrize away solver round-off
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double v = 0.5 * (m.at(i, j) + m.at(j, i));
      m.at(i, j) = v;
      m.at(j, i) = v;
    }
  }
  return m;
}

inline ComplexDense add(const ComplexDense& a, const ComplexDense& b) {
  ComplexDense s = a;
  for (std::size_t i = 0; i < s.a.size(); ++i) s.a[i] += b.a[i];
  return s;
}

inline DenseSym add(const DenseSym& a, const DenseSym& b) {
  DenseSym s = a;
  for (std::size_t i = 0; i < s.a.size(); ++i) s.a[i] += b.a[i];
  return s;
}

}  // namespace detail

// Jacobi spectrum from the Gaussian matrix model: eigenvalues of
// W1 (W1 + W2)^{-1} with W1, W2 Wishart of m1 = 2 a1 / beta and
// m2 = 2 a2 / beta degrees of freedom. Only beta in {1, 2}.
inline Spectrum sample_jacobi_matrix(const EnsembleParams& params, RngStream& stream) {
  params.validate_jacobi();
  const int n = params.n;
  double m1d = 2.0 * params.a1 / params.beta;
  double m2d = 2.0 * params.a2 / params.beta;
  int m1 = static_cast<int>(std::llround(m1d));
  int m2 = static_cast<int>(std::llround(m2d));
  if (params.beta != 1.0 && params.beta != 2.0) {
    throw ParameterError("sample_jacobi_matrix: beta must be 1 or 2");
  }
  if (std::fabs(m1d - m1) > 1e-9 || std::fabs(m2d - m2) > 1e-9 || m1 < n || m2 < n) {
    throw ParameterError("sample_jacobi_matrix: 2 a_i / beta must be integers >= n");
  }

  Spectrum spec;
  if (params.beta == 1.0) {
    DenseSym w1 = detail::wishart_real(m1, n, stream);
    DenseSym w2 = detail::wishart_real(m2, n, stream);
    auto l = detail::cholesky_lower(detail::add(w1, w2));
    spec = eigenvalues_dense(detail::whiten(w1, l));
  } else {
    detail::ComplexDense w1 = detail::wishart_complex(m1, n, stream);
    detail::ComplexDense w2 = detail::wishart_complex(m2, n, stream);
    DenseSym w1r = detail::realify(w1);
    auto l = detail::cholesky_lower(detail::realify(detail::add(w1, w2)));
    Spectrum doubled = eigenvalues_dense(detail::whiten(w1r, l));
    // the real embedding doubles every eigenvalue; keep one per pair
    spec.values.resize(n);
    for (int i = 0; i < n; ++i) {
      spec.values[i] = 0.5 * (doubled.values[2 * i] + doubled.values[2 * i + 1]);
    }
  }
  return spec;
}

struct McmcConfig {
  double proposal_scale = 0.5;
  int burn_in = 2000;
  int thinning = 50;
  double target_accept = 0.3;

  void validate() const {
    if (!(proposal_scale > 0.0) || burn_in < 0 || thinning < 1 || !(target_accept > 0.0) ||
        !(target_accept < 1.0)) {
      throw ParameterError("McmcConfig: invalid fields");
    }
  }
};

struct McmcDiagnostics {
  double accept_rate = 0.0;   // post-adaptation acceptance rate
  double ess_proxy = 0.0;     // lag-1 autocorrelation based effective size proxy
  double proposal_scale = 0.0;
};

struct McmcSample {
  Spectrum spectrum;
  McmcDiagnostics diagnostics;
};

// Random-walk Metropolis chain for the Jacobi density on logit coordinates
// t_i = log(lambda_i / (1 - lambda_i)); the log-Jacobian
// sum log(lambda_i (1 - lambda_i)) is added to the log target so the chain
// is stationary for the lambda-space density.
class JacobiMcmcChain {
 public:
  JacobiMcmcChain(const EnsembleParams& params, const McmcConfig& cfg, RngStream stream)
      : params_(params), cfg_(cfg), stream_(stream), scale_(cfg.proposal_scale) {
    params_.validate_jacobi();
    cfg_.validate();
    const int n = params_.n;
    t_.resize(n);
    for (int i = 0; i < n; ++i) {
      double lam = (i + 1.0) / (n + 1.0);
      t_[i] = std::log(lam / (1.0 - lam));
    }
    log_target_ = log_target(t_);
  }

  static double log_target_at(const std::vector<double>& t, const EnsembleParams& params) {
    std::vector<double> lam(t.size());
    double jac = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      lam[i] = 1.0 / (1.0 + std::exp(-t[i]));
      jac += std::log(lam[i]) + std::log1p(-lam[i]);
    }
    double f = log_density_jacobi(lam, params);
    return f + jac;
  }

  // Adapts the proposal scale toward target_accept during burn-in, then
  // freezes it; exact stationarity holds for everything sampled afterwards.
  void burn_in() {
    int accepted_window = 0;
    const int window = 50;
    for (int s = 0; s < cfg_.burn_in; ++s) {
      if (step()) ++accepted_window;
      if ((s + 1) % window == 0) {
        double rate = static_cast<double>(accepted_window) / window;
        scale_ *= std::exp(rate - cfg_.target_accept);
        scale_ = std::clamp(scale_, 1e-4, 50.0);
        accepted_window = 0;
      }
    }
    post_accepted_ = 0;
    post_steps_ = 0;
  }

  // Advance `thinning` frozen-scale steps and return the current state.
  McmcSample draw() {
    double prev_sum = state_sum();
    for (int s = 0; s < cfg_.thinning; ++s) {
      if (step()) ++post_accepted_;
      ++post_steps_;
    }
    double cur_sum = state_sum();
    track_autocorr(prev_sum, cur_sum);

    McmcSample out;
    out.spectrum.values.resize(t_.size());
    for (std::size_t i = 0; i < t_.size(); ++i) {
      out.spectrum.values[i] = 1.0 / (1.0 + std::exp(-t_[i]));
    }
    std::sort(out.spectrum.values.begin(), out.spectrum.values.end());
    out.diagnostics = diagnostics();
    return out;
  }

  McmcDiagnostics diagnostics() const {
    McmcDiagnostics d;
    d.accept_rate = post_steps_ > 0 ? static_cast<double>(post_accepted_) / post_steps_ : 0.0;
    d.proposal_scale = scale_;
    double rho = lag1_autocorr();
    d.ess_proxy = ac_count_ > 0 ? ac_count_ * std::max(0.0, (1.0 - rho) / (1.0 + rho)) : 0.0;
    return d;
  }

 private:
  double log_target(const std::vector<double>& t) const { return log_target_at(t, params_); }

  bool step() {
    std::vector<double> prop(t_.size());
    for (std::size_t i = 0; i < t_.size(); ++i) {
      prop[i] = t_[i] + scale_ * sample_gaussian(stream_);
    }
    double lt = log_target(prop);
    if (std::log(stream_.next_uniform()) < lt - log_target_) {
      t_ = std::move(prop);
      log_target_ = lt;
      return true;
    }
    return false;
  }

  double state_sum() const {
    double s = 0.0;
    for (double t : t_) s += 1.0 / (1.0 + std::exp(-t));
    return s;
  }

  void track_autocorr(double prev, double cur) {
    ac_sx_ += prev;
    ac_sy_ += cur;
    ac_sxx_ += prev * prev;
    ac_syy_ += cur * cur;
    ac_sxy_ += prev * cur;
    ++ac_count_;
  }

  double lag1_autocorr() const {
    if (ac_count_ < 3) return 1.0;
    double n = static_cast<double>(ac_count_);
    double cov = ac_sxy_ / n - (ac_sx_ / n) * (ac_sy_ / n);
    double vx = ac_sxx_ / n - (ac_sx_ / n) * (ac_sx_ / n);
    double vy = ac_syy_ / n - (ac_sy_ / n) * (ac_sy_ / n);
    double denom = std::sqrt(std::max(vx * vy, 1e-300));
    return std::clamp(cov / denom, -1.0, 1.0);
  }

  EnsembleParams params_;
  McmcConfig cfg_;
  RngStream stream_;
  std::vector<double> t_;
  double log_target_ = 0.0;
  double scale_ = 0.5;
  long post_accepted_ = 0;
  long post_steps_ = 0;
  double ac_sx_ = 0, ac_sy_ = 0, ac_sxx_ = 0, ac_syy_ = 0, ac_sxy_ = 0;
  long ac_count_ = 0;
};

// One post-burn-in, thinned state of the general-beta Metropolis sampler.
inline McmcSample sample_jacobi_mcmc(const EnsembleParams& params, const McmcConfig& cfg,
                                     RngStream stream) {
  JacobiMcmcChain chain(params, cfg, stream);
  chain.burn_in();
  return chain.draw();
}

// Several thinned states from a single chain (burn-in paid once).
inline std::vector<McmcSample> sample_jacobi_mcmc_many(const EnsembleParams& params,
                                                       const McmcConfig& cfg, int reps,
                                                       RngStream stream) {
  JacobiMcmcChain chain(params, cfg, stream);
  chain.burn_in();
  std::vector<McmcSample> out;
  out.reserve(reps);
  for (int r = 0; r < reps; ++r) out.push_back(chain.draw());
  return out;
}

}  // namespace ensemblelab
