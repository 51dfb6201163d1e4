#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace gb2d {

// Bad values fed to an operator (non-finite input, out-of-range parameter, ...).
class InvalidInputError : public std::invalid_argument {
public:
  explicit InvalidInputError(const std::string& what) : std::invalid_argument(what) {}
};

// A multiplier produced coefficients that are no longer Hermitian, or an
// inverse transform left a non-negligible imaginary residue.
class SpectralError : public std::runtime_error {
public:
  explicit SpectralError(const std::string& what) : std::runtime_error(what) {}
};

// The sign condition d(rho^+-)/dx1 >= 0 failed at some node during a run.
class MonotonicityLostError : public std::runtime_error {
public:
  MonotonicityLostError(double time, double margin, const std::string& what)
      : std::runtime_error(what), time(time), margin(margin) {}
  double time;    // simulation time at which the sign condition failed
  double margin;  // offending (negative) nodal minimum
};

// Fixed-point iteration hit max_iter without meeting the tolerance.
class NonContractiveError : public std::runtime_error {
public:
  NonContractiveError(std::vector<double> ratios, const std::string& what)
      : std::runtime_error(what), ratio_history(std::move(ratios)) {}
  std::vector<double> ratio_history;
};

// Config file problems, reported with key/line attribution.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gb2d
