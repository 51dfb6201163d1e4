#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gb2d/diagnostics.hpp"
#include "gb2d/state.hpp"

namespace gb2d {

enum class Scheme { IMEX_RK2, IMEX_RK4 };

struct PicardConfig {
  double slab_T = 0.05;
  int quad_points = 64;
  double tol = 1e-10;
  int max_iter = 40;
  double c0 = 1.0;  // the abstract constant of the T* formula; heuristic knob
};

struct SolverConfig {
  double dt = 1e-3;
  double t_end = 0.5;
  double cfl_safety = 0.4;
  Scheme scheme = Scheme::IMEX_RK2;
  PicardConfig picard;
  bool dealias_products = true;

  void validate() const;
};

// Time derivatives of the two periodic parts.
struct Tendency {
  RealField d_rho_plus_per;
  RealField d_rho_minus_per;
};

// Transport velocity R1^2 R2^2 (rho^+ - rho^-); mean-zero real field.
RealField velocity(const DensityState& state);

// Non-viscous right-hand side d(rho^{+-,per})/dt = -+ v (d1 rho^{+-,per} + L);
// the product is formed in physical space from dealiased factors when
// dealias_products is set.  The eps*Lap term is applied by the integrator.
Tendency transport_tendency(const DensityState& state, bool dealias_products = true);

struct StepResult {
  DensityState state;
  double dt_taken;
  double vmax;
};

// One step of the integrating-factor Runge-Kutta scheme: the heat factor
// e^{dt eps Lap} is applied exactly in Fourier space, transport explicitly.
// dt is reduced when the CFL bound dt*vmax <= cfl_safety*min(1/n1,1/n2)
// demands it; the taken dt is reported.  Throws MonotonicityLostError if the
// sign condition fails after the step.
StepResult step_imex(const DensityState& state, const SolverConfig& cfg);

// (T*)^{1/4} = min( 1/(2 c0 L), 1/(16 c0 ||(rho+,rho-)||_{W^{1,3/2} pair}) ).
double estimate_tstar(const DensityState& state, double c0);

struct PicardReport {
  std::vector<double> distance_history;  // sup-in-time W^{1,3/2} pair distances d_n
  std::vector<double> ratio_history;     // d_n / d_{n-1}
  int iterations = 0;
  bool converged = false;
  double tstar_estimate = 0.0;
  bool slab_exceeds_tstar = false;  // warning, not an error
};

struct PicardResult {
  std::vector<DensityState> trajectory;  // states at the slab time nodes
  PicardReport report;
};

// Fixed-point iteration of the mild (Duhamel) form on [0, slab_T]: the free
// heat evolution of the data plus midpoint-quadrature Duhamel integrals of
// the linear and bilinear transport terms, iterated until successive
// iterates differ by < tol.  Requires eps > 0.  Throws NonContractiveError
// with the ratio history when max_iter is reached.
PicardResult picard_mild_solve(const DensityState& state0, const SolverConfig& cfg);

struct RunOptions {
  int diag_every = 1;            // record cadence in steps
  bool store_states = true;      // keep sampled states alongside records
  DiagnosticsOptions diag;       // elastic-energy parameters etc.
  std::string checkpoint_dir;    // empty = no checkpoints
  int checkpoint_every = 0;      // in records; 0 = only on error
};

struct RunResult {
  std::vector<DiagnosticsRecord> records;
  std::vector<DensityState> sampled_states;  // filled when store_states
  std::vector<double> dt_history;
  DensityState final_state;
};

// Advances state0 to t_end with step_imex, emitting a DiagnosticsRecord every
// diag_every steps (and at t=0 and t_end).  Deterministic given the inputs.
// MonotonicityLostError propagates with a checkpoint of the last good state
// when a checkpoint directory is configured.
RunResult run(const DensityState& state0, const SolverConfig& cfg, const RunOptions& opts = {});

}  // namespace gb2d
