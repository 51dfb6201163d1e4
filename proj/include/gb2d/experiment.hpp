#pragma once

#include <string>

#include "gb2d/config.hpp"

namespace gb2d {

// Exit statuses shared by run_experiment and the CLI.
inline constexpr int kExitPass = 0;
inline constexpr int kExitVerificationFailure = 1;
inline constexpr int kExitRuntimeError = 2;
inline constexpr int kExitConfigError = 3;

// Drives one experiment per the config mode and writes its artifacts
// (echoed config, CSVs, JSON summary, checkpoints, MANIFEST) into
// cfg.output_dir.  Returns kExitPass or kExitVerificationFailure; hard
// errors leave partial outputs plus an error report and a MANIFEST marking
// incompleteness, then return kExitRuntimeError.
int run_experiment(const ExperimentConfig& cfg);

// FNV-1a 64-bit checksum used in MANIFEST files.
std::uint64_t fnv1a64_file(const std::string& path);

}  // namespace gb2d
