#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gb2d/dynamics.hpp"
#include "gb2d/state.hpp"

namespace gb2d {

// Experiment description parsed from the INI-style config format
// (sections in brackets, key = value, '#' comments; see README for the
// schema).  Unknown sections/keys and malformed values are rejected with
// line/key attribution.
struct ExperimentConfig {
  enum class Mode { Single, EpsSweep, ResolutionSweep, VerifySuite, PicardCompare };

  Mode mode = Mode::Single;

  int n1 = 64;
  int n2 = 64;
  std::vector<int> n_list;  // resolution_sweep only

  double slope_L = 1.0;
  double eps = 0.0;               // single / picard_compare (0 = inviscid)
  std::vector<double> eps_list;   // eps_sweep only
  PerturbationSpec perturbation;
  std::uint64_t seed = 0;

  SolverConfig solver;

  std::string output_dir = "out";
  int diag_every = 1;
  int checkpoint_every = 0;
  bool store_states = true;

  double lame_lambda = 1.0;
  double lame_mu = 1.0;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&);
};

// Overrides use dot-path syntax: "solver.dt=1e-4", "mode=single".
ExperimentConfig parse_config(const std::string& text,
                              const std::vector<std::string>& overrides = {});
ExperimentConfig parse_config_file(const std::string& path,
                                   const std::vector<std::string>& overrides = {});

// Canonical config text; parse_config(echo_config(c)) reproduces c exactly.
std::string echo_config(const ExperimentConfig& c);

std::string to_string(ExperimentConfig::Mode mode);

}  // namespace gb2d
