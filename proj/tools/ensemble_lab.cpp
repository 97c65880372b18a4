// Campaign driver for the beta-ensemble laboratory. The written report is a
// pure function of (config, seed); timing and the summary echo go to stderr.

#include <chrono>
#include <iostream>

#include "ensemblelab/campaign.hpp"
#include "ensemblelab/cli_config.hpp"

int main(int argc, char** argv) {
  using namespace ensemblelab;
  try {
    CampaignConfig cfg = parse_config(argc, argv);
    auto t0 = std::chrono::steady_clock::now();
    CampaignReport rep = run(cfg);
    auto t1 = std::chrono::steady_clock::now();

    if (!cfg.out_path.empty()) {
      write_report(rep, cfg);
    } else {
      std::cout << render_report(rep, cfg.format);
    }

    double secs = std::chrono::duration<double>(t1 - t0).count();
    std::cerr << "command=" << command_name(cfg.command) << " seed=" << cfg.seed
              << " replicas=" << cfg.reps << " wall_clock_s=" << secs << "\n";
    if (!rep.summary.empty()) std::cerr << "summary=" << rep.summary.dump() << "\n";
    return 0;
  } catch (const ParameterError& e) {
    std::cerr << "{\"error\":\"parameter\",\"message\":\"" << e.what() << "\"}\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "{\"error\":\"numerical\",\"message\":\"" << e.what() << "\"}\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "{\"error\":\"io\",\"message\":\"" << e.what() << "\"}\n";
    return 4;
  }
}
