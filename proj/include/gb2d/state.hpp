#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gb2d/spectral.hpp"

namespace gb2d {

// The evolved pair of periodic parts.  The physical fields are
// rho^{+-} = rho^{+-,per} + slope_L * x1; the linear-in-x1 part is never
// stored (it is not periodic), only its slope.  rho = rho^+ - rho^- equals
// the difference of the periodic parts since the slopes cancel.
struct DensityState {
  RealField rho_plus_per;
  RealField rho_minus_per;
  double slope_L;  // dislocation content per cell, > 0
  double epsilon;  // viscosity; 0 means the inviscid limit system
  double time;

  DensityState(RealField plus, RealField minus, double L, double eps, double t);

  const TorusGrid& grid() const { return rho_plus_per.grid(); }

  // rho^{+,per} - rho^{-,per} (= rho^+ - rho^-, slopes cancel).
  RealField rho_difference() const;
};

// One sinusoidal perturbation mode: amplitude * sin(2 pi (k1 x1 + k2 x2) + phase).
struct PerturbationMode {
  int k1 = 0;
  int k2 = 0;
  double amplitude = 0.0;
  double phase = 0.0;
};

// Deterministic initial-data recipe: explicit modes per species, optionally
// followed by seeded random modes.  Random amplitudes are scaled so the
// combined x1-derivative bound stays within margin_budget * L, keeping the
// data monotone.
struct PerturbationSpec {
  std::vector<PerturbationMode> plus;
  std::vector<PerturbationMode> minus;
  int random_modes = 0;         // count added to each species
  double random_amplitude = 0;  // pre-scaling amplitude scale
  int random_max_k = 3;         // random |k1|,|k2| <= this, (k1,k2) != (0,0)
  double margin_budget = 0.5;   // random part consumes at most this fraction of L
};

// Per-species hypothesis check results.  Residuals are max-norm periodicity
// defects (identically 0 for internally constructed states); margins are the
// nodal minima of slope_L + d1 rho^{+-,per}; norms are Luxemburg L log L norms
// of the densities.
struct HypothesisReport {
  double h1_residual = 0.0;
  double h2_residual = 0.0;
  double h3_margin_plus = 0.0;
  double h3_margin_minus = 0.0;
  double h4_norm_plus = 0.0;
  double h4_norm_minus = 0.0;

  double h3_margin() const { return std::min(h3_margin_plus, h3_margin_minus); }
  double h4_norm() const { return std::max(h4_norm_plus, h4_norm_minus); }
};

// Builds the t=0, eps=0 state rho^{+-,per} + L x1 from the recipe; rejects
// perturbations whose monotonicity margin is negative.
DensityState build_initial(const TorusGrid& grid, double slope_L, const PerturbationSpec& spec,
                           std::uint64_t seed);

// Width-eps smoothing of the periodic parts by the periodized-Gaussian
// multiplier exp(-2 pi^2 eps^2 |k|^2), slope raised to L + eps so the data
// become strictly monotone; eps must lie in (0, 1].
DensityState mollify(const DensityState& state, double eps);

// The same multiplier on a bare field (used by mollify and by tests).
RealField mollify_field(const RealField& f, double eps);

HypothesisReport check_hypotheses(const DensityState& state);

// Density of one species at the nodes: slope_L + d1 rho^{per} (spectral derivative).
RealField species_density(const DensityState& state, int species /* +1 or -1 */);

// Entropy floor used when evaluating theta*ln(theta) along trajectories.
inline double entropy_floor(const DensityState& state) { return 1e-12 * state.slope_L; }

// Reports the largest gamma for which the Trudinger-type bound
// quadrature(e^{gamma (f/||f||_W12)^2} - 1) <= 1 holds on f (the EXP_2
// Luxemburg gauge reading).  Observational probe only; nothing is asserted
// about its value.
double trudinger_gamma_probe(const RealField& f);

}  // namespace gb2d
