#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gb2d/elasticity.hpp"
#include "gb2d/state.hpp"

namespace gb2d {

struct DiagnosticsOptions {
  LameParams lame{1.0, 1.0};  // parameters for the diagnostic elastic energy
  bool with_elastic = true;
  bool with_profiles = true;
};

// Per-sample values of the a priori estimates.  theta^{+-} denotes the
// species densities slope_L + d1 rho^{+-,per}; rho the species difference.
// Cumulative integrals extend the previous record by the trapezoid rule, so
// they are exact trapezoid integrals of the recorded rates by construction.
struct DiagnosticsRecord {
  double time = 0.0;

  double entropy_N = 0.0;          // sum_pm quad(theta ln theta)
  double dissipation_rate = 0.0;   // quad((R1 R2 (theta+ - theta-))^2)
  double dissipation_cum = 0.0;
  double visc_entropy_rate = 0.0;  // eps * sum_pm quad(|grad theta|^2/theta)
  double visc_entropy_cum = 0.0;

  double energy_E = 0.0;           // (1/2) quad((R1 R2 rho)^2)
  double energy_flux_rate = 0.0;   // quad(v^2 (theta+ + theta-))
  double energy_flux_cum = 0.0;
  double energy_visc_rate = 0.0;   // eps * quad(|grad R1 R2 rho|^2)
  double energy_visc_cum = 0.0;
  double elastic_E = 0.0;

  double l2_plus = 0.0;            // ||rho^{+-,per}||_2
  double l2_minus = 0.0;
  double llogl_plus = 0.0;         // Luxemburg L log L norms of theta^{+-}
  double llogl_minus = 0.0;
  double h3_plus = 0.0;            // nodal minima of theta^{+-}
  double h3_minus = 0.0;
  double velocity_w12 = 0.0;       // ||R1^2 R2^2 rho||_{W^{1,2}}
  double tendency_l1_plus = 0.0;   // L1 norms of the full right-hand side
  double tendency_l1_minus = 0.0;
  long clamp_count = 0;            // entropy-floor clamps (0 in healthy runs)

  std::vector<double> mean_plus;   // x1-means m^{+-}(x2)
  std::vector<double> mean_minus;
  std::vector<double> i_plus;      // I^{+-}(x2): row quadrature of
  std::vector<double> i_minus;     //   +- (R1^2R2^2 d1 rho)(rho^{+-,per} - m^{+-})
};

DiagnosticsRecord record(const DensityState& state, const DiagnosticsRecord* prev,
                         const DiagnosticsOptions& opts = {});

// ---- verifiers -----------------------------------------------------------
//
// Tolerances follow one convention: tol = c_tol_rel * (|N(0)|+1 or |E(0)|+1)
// * (dt + 1/min(n1,n2)) per step, accumulated over steps for the running
// inequalities.  Everything is reported; `pass` applies the thresholds.

struct EntropyReport {
  bool pass = true;
  int first_fail = -1;
  double max_margin = 0.0;            // max_n (N + D - N(0)), signed
  double max_violation = 0.0;         // max_n (margin_n - tol_n), <= 0 when passing
  double balance_residual_max = 0.0;  // max_n |N + D + D_visc - N(0)|
  bool one_step_pass = true;          // N_{n+1} + dD_n <= N_n + per-step slack
};

EntropyReport verify_entropy_inequality(const std::vector<DiagnosticsRecord>& records,
                                        int grid_min_n, double c_tol_rel = 1e-3);

struct EnergyReport {
  bool pass = true;
  int first_fail = -1;
  double max_margin = 0.0;            // max_n (E + flux - E(0)), signed
  double max_violation = 0.0;
  double balance_residual_max = 0.0;  // max_n |E + flux + visc - E(0)|
  bool elastic_monotone = true;       // per-step slack 1e-6 E_el(0) + visc correction
  double elastic_max_rise = 0.0;
  double c1 = 0.0;                    // the constant scaling the elastic correction
};

EnergyReport verify_energy_inequality(const std::vector<DiagnosticsRecord>& records,
                                      int grid_min_n, const DiagnosticsOptions& opts = {},
                                      double c_tol_rel = 1e-3);

struct OscillationReport {
  bool pass = true;
  double bound = 0.0;     // 2 L + 1e-8
  double max_row_tv = 0.0;  // max over rows/species of the x1 quadrature of |d1 rho^{per}|
  double max_row_osc = 0.0; // max over rows/species of sup |rho^{per} - row mean|
};

OscillationReport verify_oscillation_bound(const DensityState& state);

struct MeanEquationReport {
  bool pass = true;
  double residual_max = 0.0;  // max over rows and interior times of the (5.6) defect
  double threshold = 0.0;
};

// Forward-difference residual of the x1-averaged equation
// d_t m - eps d2^2 m = I; first order in the record spacing.
MeanEquationReport verify_mean_equation(const std::vector<DiagnosticsRecord>& records,
                                        double epsilon, double threshold);

struct DualityReport {
  std::vector<double> ratios;  // per probe: |<psi, R1^2R2^2 dt rho>| / ||psi||_{L2 W12}
  double max_ratio = 0.0;
};

// Probes are time series of fields aligned with the sampled states.
DualityReport verify_duality_bound(const std::vector<DensityState>& states,
                                   const std::vector<std::vector<RealField>>& probes);

// ---- emission -------------------------------------------------------------

// One row per record, fixed column order (see README), 17 significant digits.
void write_records_csv(const std::vector<DiagnosticsRecord>& records, const std::string& path);

// Long-format per-row profiles: time, row, x2, m_plus, m_minus, i_plus, i_minus.
void write_profiles_csv(const std::vector<DiagnosticsRecord>& records, int n2,
                        const std::string& path);

}  // namespace gb2d
