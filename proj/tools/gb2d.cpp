// Command-line driver: one subcommand per experiment mode, a config file
// with dot-path overrides, and the exit-code contract
// 0 = pass, 1 = verification failure, 2 = runtime error, 3 = config error.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gb2d/experiment.hpp"

using namespace gb2d;

int main(int argc, char** argv) {
  CLI::App app{"gb2d: pseudo-spectral solver and verification suite for the "
               "Groma-Balogh dislocation-density dynamics on the periodic plane"};
  app.require_subcommand(0, 1);
  app.fallthrough();  // parent options remain valid after a subcommand

  std::string config_path;
  std::vector<std::string> overrides;
  app.add_option("-c,--config", config_path, "config file (INI-style; see README)");
  app.add_option("-s,--set", overrides,
                 "override a config key, dot-path syntax (e.g. solver.dt=1e-4)");

  std::string forced_mode;
  for (const char* name : {"single", "eps-sweep", "resolution-sweep", "verify-suite",
                           "picard-compare"}) {
    CLI::App* sub = app.add_subcommand(name, "run in this mode");
    std::string mode_key = name;
    for (auto& ch : mode_key)
      if (ch == '-') ch = '_';
    sub->callback([&forced_mode, mode_key] { forced_mode = mode_key; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    std::vector<std::string> all_overrides = overrides;
    if (!forced_mode.empty()) all_overrides.push_back("mode=" + forced_mode);
    if (const char* root = std::getenv("GB2D_OUTPUT_ROOT"); root && *root)
      all_overrides.insert(all_overrides.begin(),
                           std::string("output.directory=") + root);

    ExperimentConfig cfg = config_path.empty()
                               ? parse_config("", all_overrides)
                               : parse_config_file(config_path, all_overrides);
    const int status = run_experiment(cfg);
    if (status == kExitVerificationFailure)
      std::cerr << "verification failure (see " << cfg.output_dir << ")\n";
    else if (status == kExitRuntimeError)
      std::cerr << "runtime error (see " << cfg.output_dir << "/error.json)\n";
    return status;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntimeError;
  }
}
