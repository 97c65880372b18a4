#pragma once

// Flag / config-file resolution for the campaign driver. A flat JSON config
// file mirrors the flags; flags always override file values; unknown keys
// in the file are rejected.

#include <cstdint>
#include <fstream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ensemblelab/campaign.hpp"
#include "ensemblelab/common.hpp"
#include "ensemblelab/parallel.hpp"

namespace ensemblelab {

namespace detail {

inline void apply_config_file(const std::string& path, CampaignConfig& cfg, bool& seed_set) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError("malformed config file " + path + ": " + e.what());
  }
  if (!j.is_object()) throw ParameterError("config file must hold one JSON object");
  static const std::set<std::string> known = {"command", "ensemble", "beta", "n",
                                              "a1",      "a2",       "gamma", "reps",
                                              "seed",    "threads",  "out",   "format"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.count(it.key())) {
      throw ParameterError("unknown config key: " + it.key());
    }
  }
  try {
    if (j.contains("command")) cfg.command = parse_command(j["command"].get<std::string>());
    if (j.contains("ensemble")) cfg.ensemble = parse_ensemble(j["ensemble"].get<std::string>());
    if (j.contains("beta")) cfg.beta = j["beta"].get<double>();
    if (j.contains("n")) cfg.n = j["n"].get<int>();
    if (j.contains("a1")) cfg.a1 = j["a1"].get<double>();
    if (j.contains("a2")) cfg.a2 = j["a2"].get<double>();
    if (j.contains("gamma")) cfg.gamma_target = j["gamma"].get<double>();
    if (j.contains("reps")) cfg.reps = j["reps"].get<int>();
    if (j.contains("seed")) {
      cfg.seed = j["seed"].get<uint64_t>();
      seed_set = true;
    }
    if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
    if (j.contains("out")) cfg.out_path = j["out"].get<std::string>();
    if (j.contains("format")) {
      std::string f = j["format"].get<std::string>();
      if (f == "csv") cfg.format = ReportFormat::csv;
      else if (f == "json") cfg.format = ReportFormat::json;
      else throw ParameterError("format must be csv or json, got: " + f);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("bad config value: ") + e.what());
  }
}

}  // namespace detail

// Parses argv (plus an optional --config file) into a CampaignConfig.
// Throws ParameterError on malformed input, including empty argv.
inline CampaignConfig parse_config(int argc, const char* const* argv) {
  if (argc <= 1) {
    throw ParameterError(
        "no arguments; usage: ensemble_lab --command <name> [--ensemble e] [--beta b] [--n n] "
        "[--a1 v] [--a2 v] [--gamma g] [--reps r] [--seed s] [--threads t] [--out path] "
        "[--format csv|json] [--config file]");
  }

  CampaignConfig cfg;
  if (const char* env = std::getenv("ENSEMBLE_LAB_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) cfg.threads = v;
  }
  bool seed_set = false;

  // apply the config file first so that flags can override it
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      detail::apply_config_file(argv[i + 1], cfg, seed_set);
    }
  }

  CLI::App app{"beta-ensemble numerical laboratory"};
  std::string command, ensemble, format, config_path;
  app.add_option("--command", command, "campaign to run");
  app.add_option("--ensemble", ensemble, "laguerre | jacobi-matrix | jacobi-mcmc");
  app.add_option("--beta", cfg.beta, "ensemble beta > 0");
  app.add_option("--n", cfg.n, "dimension");
  app.add_option("--a1", cfg.a1, "first shape parameter");
  app.add_option("--a2", cfg.a2, "second shape parameter");
  app.add_option("--gamma", cfg.gamma_target, "target gamma (default n beta / (2 a1))");
  app.add_option("--reps", cfg.reps, "replica count (sweep points for regime)");
  uint64_t seed_flag = 0;
  auto* seed_opt = app.add_option("--seed", seed_flag, "RNG seed (auto-generated if omitted)");
  app.add_option("--threads", cfg.threads, "worker threads");
  app.add_option("--out", cfg.out_path, "report output path");
  app.add_option("--format", format, "csv | json");
  app.add_option("--config", config_path, "flat JSON config file mirroring the flags");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    throw ParameterError(std::string("argument error: ") + e.what());
  }

  if (!command.empty()) cfg.command = parse_command(command);
  if (!ensemble.empty()) cfg.ensemble = parse_ensemble(ensemble);
  if (!format.empty()) {
    if (format == "csv") cfg.format = ReportFormat::csv;
    else if (format == "json") cfg.format = ReportFormat::json;
    else throw ParameterError("format must be csv or json, got: " + format);
  }
  if (seed_opt->count() > 0) {
    cfg.seed = seed_flag;
    seed_set = true;
  }
  if (command.empty() && config_path.empty()) {
    throw ParameterError("--command is required (directly or via --config)");
  }
  if (!seed_set) {
    std::random_device rd;
    cfg.seed = (static_cast<uint64_t>(rd()) << 32) ^ rd();
  }
  return cfg;
}

}  // namespace ensemblelab
