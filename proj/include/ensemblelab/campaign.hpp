#pragma once

// Batch driver behind the CLI: config resolution, campaign execution with
// deterministic replica parallelism, and CSV/JSON report emission. Reports
// are pure functions of (config, seed); timing goes to stderr only.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ensemblelab/common.hpp"
#include "ensemblelab/coupling.hpp"
#include "ensemblelab/ensembles.hpp"
#include "ensemblelab/mp_law.hpp"
#include "ensemblelab/parallel.hpp"
#include "ensemblelab/rng.hpp"
#include "ensemblelab/stats.hpp"

namespace ensemblelab {

enum class Command {
  sample,
  kn,
  tv,
  verify_bulk,
  verify_extremes,
  verify_clt,
  verify_edge_soft,
  verify_edge_hard,
  regime,
};

enum class EnsembleKind { laguerre, jacobi_matrix, jacobi_mcmc };
enum class ReportFormat { csv, json };

inline Command parse_command(const std::string& s) {
  if (s == "sample") return Command::sample;
  if (s == "kn") return Command::kn;
  if (s == "tv") return Command::tv;
  if (s == "verify-bulk") return Command::verify_bulk;
  if (s == "verify-extremes") return Command::verify_extremes;
  if (s == "verify-clt") return Command::verify_clt;
  if (s == "verify-edge-soft") return Command::verify_edge_soft;
  if (s == "verify-edge-hard") return Command::verify_edge_hard;
  if (s == "regime") return Command::regime;
  throw ParameterError("unknown command: " + s);
}

inline std::string command_name(Command c) {
  switch (c) {
    case Command::sample: return "sample";
    case Command::kn: return "kn";
    case Command::tv: return "tv";
    case Command::verify_bulk: return "verify-bulk";
    case Command::verify_extremes: return "verify-extremes";
    case Command::verify_clt: return "verify-clt";
    case Command::verify_edge_soft: return "verify-edge-soft";
    case Command::verify_edge_hard: return "verify-edge-hard";
    case Command::regime: return "regime";
  }
  return "?";
}

inline EnsembleKind parse_ensemble(const std::string& s) {
  if (s == "laguerre") return EnsembleKind::laguerre;
  if (s == "jacobi-matrix") return EnsembleKind::jacobi_matrix;
  if (s == "jacobi-mcmc") return EnsembleKind::jacobi_mcmc;
  throw ParameterError("unknown ensemble: " + s);
}

inline std::string ensemble_name(EnsembleKind e) {
  switch (e) {
    case EnsembleKind::laguerre: return "laguerre";
    case EnsembleKind::jacobi_matrix: return "jacobi-matrix";
    case EnsembleKind::jacobi_mcmc: return "jacobi-mcmc";
  }
  return "?";
}

struct CampaignConfig {
  Command command = Command::kn;
  EnsembleKind ensemble = EnsembleKind::laguerre;
  double beta = 2.0;
  int n = 1;
  double a1 = 1.0;
  double a2 = 1.0;
  double gamma_target = 0.0;  // 0 means: use n beta / (2 a1)
  int reps = 1;
  uint64_t seed = 0;
  int threads = 1;
  std::string out_path;
  ReportFormat format = ReportFormat::csv;

  EnsembleParams params() const { return EnsembleParams{beta, n, a1, a2}; }
  double gamma_used() const { return gamma_target > 0.0 ? gamma_target : params().gamma_hat(); }

  void validate() const {
    if (reps < 1) throw ParameterError("reps must be >= 1");
    if (threads < 1) throw ParameterError("threads must be >= 1");
    if (n < 1) throw ParameterError("n must be >= 1");
    if (!(beta > 0.0)) throw ParameterError("beta must be positive");
  }
};

struct CampaignReport {
  nlohmann::ordered_json meta;     // config echo, seed, version
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::ordered_json>> rows;
  nlohmann::ordered_json summary;  // aggregated statistics
};

namespace detail {

inline Spectrum draw_spectrum(EnsembleKind kind, const EnsembleParams& params, RngStream stream) {
  switch (kind) {
    case EnsembleKind::laguerre:
      return sample_laguerre(params, stream);
    case EnsembleKind::jacobi_matrix:
      return sample_jacobi_matrix(params, stream);
    case EnsembleKind::jacobi_mcmc:
      return sample_jacobi_mcmc(params, McmcConfig{}, stream).spectrum;
  }
  throw ParameterError("bad ensemble");
}

struct Moments {
  double mean = 0.0, var = 0.0, skewness = 0.0, excess_kurtosis = 0.0;
};

inline Moments sample_moments(const std::vector<double>& xs) {
  Moments m;
  const double n = static_cast<double>(xs.size());
  for (double x : xs) m.mean += x;
  m.mean /= n;
  double m2 = 0, m3 = 0, m4 = 0;
  for (double x : xs) {
    double d = x - m.mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  m.var = m2 * n / (n - 1.0);
  m.skewness = m3 / std::pow(m2, 1.5);
  m.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  return m;
}

}  // namespace detail

inline CampaignReport run(const CampaignConfig& cfg) {
  cfg.validate();
  CampaignReport rep;
  rep.meta["command"] = command_name(cfg.command);
  rep.meta["ensemble"] = ensemble_name(cfg.ensemble);
  rep.meta["beta"] = cfg.beta;
  rep.meta["n"] = cfg.n;
  rep.meta["a1"] = cfg.a1;
  rep.meta["a2"] = cfg.a2;
  rep.meta["gamma"] = cfg.gamma_used();
  rep.meta["reps"] = cfg.reps;
  rep.meta["seed"] = cfg.seed;
  rep.meta["library_version"] = kVersion;

  RngStream root = RngStream::from_seed(cfg.seed);
  const EnsembleParams params = cfg.params();
  const double gamma = cfg.gamma_used();

  switch (cfg.command) {
    case Command::sample: {
      rep.columns = {"replica", "index", "value"};
      auto spectra = parallel_map<Spectrum>(cfg.reps, cfg.threads, [&](int r) {
        return detail::draw_spectrum(cfg.ensemble, params,
                                     root.child(static_cast<uint64_t>(r), "sample"));
      });
      for (int r = 0; r < cfg.reps; ++r) {
        for (std::size_t i = 0; i < spectra[r].values.size(); ++i) {
          rep.rows.push_back({r, static_cast<int>(i), spectra[r].values[i]});
        }
      }
      break;
    }

    case Command::kn: {
      rep.columns = {"log_kn_exact", "log_kn_asymptotic", "gap"};
      double exact = log_kn_exact(params);
      double asym = log_kn_asymptotic(cfg.beta, cfg.n, gamma, cfg.a2);
      rep.rows.push_back({exact, asym, std::fabs(exact - asym)});
      rep.summary["log_kn_exact"] = exact;
      rep.summary["log_kn_asymptotic"] = asym;
      break;
    }

    case Command::tv: {
      rep.columns = {"replica", "log_kn", "log_ln", "kl_product", "abs_dev"};
      double log_kn = log_kn_exact(params);
      auto rows = estimate_tv_rows(params, cfg.reps, root, cfg.threads);
      for (int r = 0; r < cfg.reps; ++r) {
        nlohmann::ordered_json ll =
            rows[r].log_ln ? nlohmann::ordered_json(*rows[r].log_ln) : nlohmann::ordered_json();
        rep.rows.push_back({r, log_kn, ll, rows[r].weight, rows[r].abs_dev});
      }
      TvEstimate est = tv_estimate_from_rows(rows);
      rep.summary["tv_hat"] = est.tv_hat;
      rep.summary["stderr_tv"] = est.stderr_tv;
      rep.summary["unit_mean_hat"] = est.unit_mean_hat;
      rep.summary["stderr_mean"] = est.stderr_mean;
      break;
    }

    case Command::verify_bulk: {
      rep.columns = {"replica", "ks_distance"};
      MPLaw law(gamma);
      const double factor = cfg.ensemble == EnsembleKind::laguerre
                                ? gamma / (cfg.n * cfg.beta)
                                : params.c() * cfg.a2 / cfg.n;
      auto ks = parallel_map<double>(cfg.reps, cfg.threads, [&](int r) {
        Spectrum s = detail::draw_spectrum(cfg.ensemble, params,
                                           root.child(static_cast<uint64_t>(r), "bulk"));
        return ks_distance(scale_measure(s, factor), law);
      });
      double mean = 0.0;
      for (int r = 0; r < cfg.reps; ++r) {
        rep.rows.push_back({r, ks[r]});
        mean += ks[r];
      }
      rep.summary["mean_ks"] = mean / cfg.reps;
      break;
    }

    case Command::verify_extremes: {
      rep.columns = {"replica", "scaled_max", "scaled_min"};
      const bool laguerre = cfg.ensemble == EnsembleKind::laguerre;
      struct Pair {
        double mx, mn;
      };
      auto vals = parallel_map<Pair>(cfg.reps, cfg.threads, [&](int r) {
        Spectrum s = detail::draw_spectrum(cfg.ensemble, params,
                                           root.child(static_cast<uint64_t>(r), "extremes"));
        double f = laguerre ? 1.0 / cfg.n : cfg.a2 / cfg.n;
        return Pair{f * s.max(), f * s.min()};
      });
      double mean_max = 0.0, mean_min = 0.0;
      for (int r = 0; r < cfg.reps; ++r) {
        rep.rows.push_back({r, vals[r].mx, vals[r].mn});
        mean_max += vals[r].mx;
        mean_min += vals[r].mn;
      }
      mean_max /= cfg.reps;
      mean_min /= cfg.reps;
      double rg = std::sqrt(gamma);
      double target_max = laguerre ? cfg.beta * (1.0 + 1.0 / rg) * (1.0 + 1.0 / rg)
                                   : cfg.beta * (1.0 + rg) * (1.0 + rg) / (2.0 * gamma);
      double target_min = laguerre ? cfg.beta * (1.0 - 1.0 / rg) * (1.0 - 1.0 / rg)
                                   : cfg.beta * (1.0 - rg) * (1.0 - rg) / (2.0 * gamma);
      rep.summary["mean_scaled_max"] = mean_max;
      rep.summary["mean_scaled_min"] = mean_min;
      rep.summary["target_max"] = target_max;
      rep.summary["target_min"] = target_min;
      rep.summary["rel_err_max"] = std::fabs(mean_max - target_max) / std::fabs(target_max);
      if (target_min != 0.0) {
        rep.summary["rel_err_min"] = std::fabs(mean_min - target_min) / std::fabs(target_min);
      }
      break;
    }

    case Command::verify_clt: {
      rep.columns = {"replica", "x1", "x2"};
      const CltScaling scaling = cfg.ensemble == EnsembleKind::laguerre ? CltScaling::laguerre
                                                                        : CltScaling::jacobi;
      struct Pair {
        double x1, x2;
      };
      auto vals = parallel_map<Pair>(cfg.reps, cfg.threads, [&](int r) {
        Spectrum s = detail::draw_spectrum(cfg.ensemble, params,
                                           root.child(static_cast<uint64_t>(r), "clt"));
        return Pair{clt_stat(s, params, 1, scaling), clt_stat(s, params, 2, scaling)};
      });
      std::vector<double> x1(cfg.reps), x2(cfg.reps);
      for (int r = 0; r < cfg.reps; ++r) {
        rep.rows.push_back({r, vals[r].x1, vals[r].x2});
        x1[r] = vals[r].x1;
        x2[r] = vals[r].x2;
      }
      auto m1 = detail::sample_moments(x1);
      auto m2 = detail::sample_moments(x2);
      rep.summary["x1_mean"] = m1.mean;
      rep.summary["x1_var"] = m1.var;
      rep.summary["x1_skewness"] = m1.skewness;
      rep.summary["x1_excess_kurtosis"] = m1.excess_kurtosis;
      rep.summary["x2_mean"] = m2.mean;
      rep.summary["x2_var"] = m2.var;
      rep.summary["x2_skewness"] = m2.skewness;
      rep.summary["x2_excess_kurtosis"] = m2.excess_kurtosis;
      break;
    }

    case Command::verify_edge_soft: {
      rep.columns = {"replica", "soft_edge_stat", "airy_lambda1"};
      AiryGrid grid{1e-2, 10.0};
      auto jac = parallel_map<double>(cfg.reps, cfg.threads, [&](int r) {
        Spectrum s = detail::draw_spectrum(cfg.ensemble, params,
                                           root.child(static_cast<uint64_t>(r), "soft-jacobi"));
        return soft_edge_statistic(s, params, 1);
      });
      auto airy = parallel_map<double>(cfg.reps, cfg.threads, [&](int r) {
        RngStream s = root.child(static_cast<uint64_t>(r), "soft-airy");
        return sample_airy_spectrum(cfg.beta, 1, grid, s)[0];
      });
      for (int r = 0; r < cfg.reps; ++r) rep.rows.push_back({r, jac[r], airy[r]});
      rep.summary["ks_two_sample"] =
          ks_two_sample(EmpiricalMeasure(jac), EmpiricalMeasure(airy));
      break;
    }

    case Command::verify_edge_hard: {
      rep.columns = {"replica", "hard_edge_stat", "oracle_lambda0"};
      const double c = 2.0 * cfg.a1 / cfg.beta - cfg.n;
      const int n_large = 300;
      auto jac = parallel_map<double>(cfg.reps, cfg.threads, [&](int r) {
        Spectrum s = detail::draw_spectrum(cfg.ensemble, params,
                                           root.child(static_cast<uint64_t>(r), "hard-jacobi"));
        return hard_edge_statistic(s, params, 1);
      });
      auto oracle = parallel_map<double>(cfg.reps, cfg.threads, [&](int r) {
        RngStream s = root.child(static_cast<uint64_t>(r), "hard-oracle");
        return hard_edge_oracle(cfg.beta, c, 1, n_large, s)[0];
      });
      for (int r = 0; r < cfg.reps; ++r) rep.rows.push_back({r, jac[r], oracle[r]});
      rep.summary["c"] = c;
      rep.summary["ks_two_sample"] =
          ks_two_sample(EmpiricalMeasure(jac), EmpiricalMeasure(oracle));
      break;
    }

    case Command::regime: {
      // sweep: n doubling from cfg.n, a1 = ceil(n beta / (2 gamma)), a2 = n^5;
      // reps is the number of sweep points
      rep.columns = {"n", "a1", "a2", "ratio_a1", "ratio_n", "gamma_hat", "gamma_gap"};
      std::vector<EnsembleParams> seq;
      int nk = cfg.n;
      for (int k = 0; k < cfg.reps; ++k) {
        EnsembleParams p;
        p.beta = cfg.beta;
        p.n = nk;
        p.a1 = std::ceil(nk * cfg.beta / (2.0 * gamma));
        p.a2 = std::pow(static_cast<double>(nk), 5.0);
        seq.push_back(p);
        nk *= 2;
      }
      auto reports = check_regime(seq, gamma);
      for (std::size_t i = 0; i < seq.size(); ++i) {
        rep.rows.push_back({seq[i].n, seq[i].a1, seq[i].a2, reports[i].ratio_a1,
                            reports[i].ratio_n, reports[i].gamma_hat, reports[i].gamma_gap});
      }
      break;
    }
  }
  return rep;
}

namespace detail {

inline std::string csv_cell(const nlohmann::ordered_json& v) {
  if (v.is_null()) return "-inf";
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") != std::string::npos) {
      std::string quoted = "\"";
      for (char ch : s) {
        if (ch == '"') quoted += '"';
        quoted += ch;
      }
      quoted += '"';
      return quoted;
    }
    return s;
  }
  return v.dump();
}

}  // namespace detail

inline std::string render_csv(const CampaignReport& rep) {
  std::ostringstream os;
  for (std::size_t i = 0; i < rep.columns.size(); ++i) {
    if (i) os << ',';
    os << rep.columns[i];
  }
  os << '\n';
  for (const auto& row : rep.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << detail::csv_cell(row[i]);
    }
    os << '\n';
  }
  return os.str();
}

inline std::string render_json(const CampaignReport& rep) {
  nlohmann::ordered_json j;
  j["meta"] = rep.meta;
  j["columns"] = rep.columns;
  j["rows"] = rep.rows;
  j["summary"] = rep.summary;
  return j.dump(2) + "\n";
}

inline std::string render_report(const CampaignReport& rep, ReportFormat format) {
  return format == ReportFormat::csv ? render_csv(rep) : render_json(rep);
}

inline void write_report(const CampaignReport& rep, const CampaignConfig& cfg) {
  if (cfg.out_path.empty()) return;
  std::ofstream out(cfg.out_path, std::ios::binary);
  if (!out) throw IoError("cannot open output file: " + cfg.out_path);
  out << render_report(rep, cfg.format);
  if (!out) throw IoError("write failed: " + cfg.out_path);
}

}  // namespace ensemblelab
