#pragma once

// Laguerre <-> Jacobi coupling: the gamma-ratio constant K_n (exact and
// Stirling asymptotic), the likelihood factor L_n, a Monte Carlo estimator
// of the total-variation distance E|K_n L_n(mu) - 1|, and the regime
// ratios a1/sqrt(a2), n/sqrt(a2).

#include <cmath>
#include <optional>
#include <vector>

#include "ensemblelab/common.hpp"
#include "ensemblelab/ensembles.hpp"
#include "ensemblelab/parallel.hpp"
#include "ensemblelab/rng.hpp"

namespace ensemblelab {

struct TvEstimate {
  double tv_hat = 0.0;        // estimate of E|K_n L_n(mu) - 1|
  double unit_mean_hat = 0.0; // estimate of E[K_n L_n(mu)]
  double stderr_tv = 0.0;
  double stderr_mean = 0.0;
  int reps = 0;
};

struct RegimeReport {
  double ratio_a1 = 0.0;   // a1 / sqrt(a2)
  double ratio_n = 0.0;    // n / sqrt(a2)
  double gamma_hat = 0.0;  // n beta / (2 a1)
  double gamma_gap = 0.0;  // |gamma_hat - gamma_target|
};

// log K_n = -n a1 log a2 + sum_{i=0}^{n-1} [lgamma(a1+a2-beta i/2) - lgamma(a2-beta i/2)]
inline double log_kn_exact(const EnsembleParams& params) {
  const double beta = params.beta, a1 = params.a1, a2 = params.a2;
  const int n = params.n;
  if (!(a2 > 0.5 * beta * (n - 1))) {
    throw ParameterError("log_kn_exact: need a2 > (beta/2)(n-1)");
  }
  // For integer a1 the gamma ratio telescopes:
  // log Gamma(a1+a2-off) - log Gamma(a2-off) - a1 log a2
  //   = sum_{j=0}^{a1-1} log1p((j - off) / a2),
  // which avoids the catastrophic cancellation of subtracting O(a2 log a2)
  // lgamma values when a2 is huge.
  const bool integer_a1 = a1 == std::floor(a1) && a1 <= 1e6;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    double off = 0.5 * beta * i;
    if (integer_a1) {
      for (long j = 0; j < static_cast<long>(a1); ++j) {
        sum += std::log1p((j - off) / a2);
      }
    } else {
      sum += std::lgamma(a1 + a2 - off) - std::lgamma(a2 - off) - a1 * std::log(a2);
    }
  }
  return sum;
}

// Leading Stirling term (1-gamma) beta^2 n^3 / (8 a2 gamma^2).
inline double log_kn_asymptotic(double beta, int n, double gamma, double a2) {
  if (!(gamma > 0.0) || gamma > 1.0 || !(a2 > 0.0)) {
    throw ParameterError("log_kn_asymptotic: need gamma in (0,1], a2 > 0");
  }
  double n3 = static_cast<double>(n) * n * n;
  return (1.0 - gamma) * beta * beta * n3 / (8.0 * a2 * gamma * gamma);
}

// log L_n(mu); empty when the indicator max mu_i <= 2 a2 fails (L_n = 0).
inline std::optional<double> log_ln(const std::vector<double>& mu, const EnsembleParams& params) {
  const double a2 = params.a2, p = params.p();
  double sum_mu = 0.0, sum_log = 0.0;
  for (double m : mu) {
    if (!(m >= 0.0)) throw ParameterError("log_ln: mu entries must be non-negative");
    if (m > 2.0 * a2) return std::nullopt;
    sum_mu += m;
    sum_log += std::log1p(-m / (2.0 * a2));
  }
  return 0.5 * sum_mu + (a2 - p) * sum_log;
}

struct TvRow {
  std::optional<double> log_ln;  // empty on indicator hits
  double weight = 0.0;           // K_n L_n, 0 on indicator hits
  double abs_dev = 1.0;          // |K_n L_n - 1|
};

// Per-replica coupling weights over Laguerre draws mu (a = a1). All gamma
// products stay in log space; indicator hits carry weight 0.
inline std::vector<TvRow> estimate_tv_rows(const EnsembleParams& params, int reps,
                                           RngStream stream, int threads = 1) {
  params.validate_jacobi();
  const double log_kn = log_kn_exact(params);
  return parallel_map<TvRow>(reps, threads, [&](int r) {
    RngStream s = stream.child(static_cast<uint64_t>(r), "tv-replica");
    Spectrum mu = sample_laguerre(params, s);
    // bisection round-off can leave the smallest eigenvalue at -1e-10 or so
    for (double& m : mu.values) m = std::max(m, 0.0);
    auto ll = log_ln(mu.values, params);
    TvRow row;
    row.log_ln = ll;
    if (ll) {
      row.weight = std::exp(log_kn + *ll);
      if (!std::isfinite(row.weight)) throw NumericalError("estimate_tv: non-finite summand");
    }
    row.abs_dev = std::fabs(row.weight - 1.0);
    return row;
  });
}

inline TvEstimate tv_estimate_from_rows(const std::vector<TvRow>& rows) {
  const int reps = static_cast<int>(rows.size());

  // jackknife standard error of the mean (leave-one-out)
  auto mean_and_se = [reps](auto&& get) {
    double mean = 0.0;
    for (int r = 0; r < reps; ++r) mean += get(r);
    mean /= reps;
    double ss = 0.0;
    for (int r = 0; r < reps; ++r) {
      double d = get(r) - mean;
      ss += d * d;
    }
    double se = std::sqrt(ss / (static_cast<double>(reps) * (reps - 1)));
    return std::pair<double, double>(mean, se);
  };

  TvEstimate est;
  est.reps = reps;
  auto [tv, se_tv] = mean_and_se([&](int r) { return rows[r].abs_dev; });
  auto [um, se_um] = mean_and_se([&](int r) { return rows[r].weight; });
  est.tv_hat = tv;
  est.stderr_tv = se_tv;
  est.unit_mean_hat = um;
  est.stderr_mean = se_um;
  return est;
}

// Monte Carlo estimate of ||L(2 a2 lambda) - L(mu)|| = E|K_n L_n(mu) - 1|;
// indicator hits contribute |0 - 1| = 1 to the TV mean.
inline TvEstimate estimate_tv(const EnsembleParams& params, int reps, RngStream stream,
                              int threads = 1) {
  if (reps < 100) throw ParameterError("estimate_tv: reps must be >= 100");
  return tv_estimate_from_rows(estimate_tv_rows(params, reps, stream, threads));
}

inline std::vector<RegimeReport> check_regime(const std::vector<EnsembleParams>& sequence,
                                              double gamma_target) {
  if (sequence.empty()) throw ParameterError("check_regime: empty sequence");
  std::vector<RegimeReport> out;
  out.reserve(sequence.size());
  for (const auto& p : sequence) {
    RegimeReport r;
    double sq = std::sqrt(p.a2);
    r.ratio_a1 = p.a1 / sq;
    r.ratio_n = p.n / sq;
    r.gamma_hat = p.gamma_hat();
    r.gamma_gap = std::fabs(r.gamma_hat - gamma_target);
    out.push_back(r);
  }
  return out;
}

}  // namespace ensemblelab
