#include "gb2d/verify.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "gb2d/orlicz.hpp"
#include "gb2d/random_fields.hpp"

namespace gb2d {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

double max_abs_diff(const SpectralCoeffs& a, const SpectralCoeffs& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.coeffs().size(); ++i)
    m = std::max(m, std::abs(a.coeffs()[i] - b.coeffs()[i]));
  return m;
}

double max_abs_diff(const RealField& a, const RealField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i)
    m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  return m;
}

// ---- standard-matrix cache ------------------------------------------------

struct MatrixOutcome {
  MatrixEntry entry;
  EntropyReport entropy;
  EnergyReport energy;
  double min_h3 = 0.0;
  double max_row_tv = 0.0;
  double max_row_osc = 0.0;
  double osc_bound = 0.0;
};

const std::vector<MatrixOutcome>& matrix_outcomes() {
  static const std::vector<MatrixOutcome> outcomes = [] {
    std::vector<MatrixOutcome> out;
    for (const MatrixEntry& e : standard_test_matrix()) {
      const TorusGrid grid(e.n, e.n);
      DensityState state0 =
          mollify(build_initial(grid, e.L, matrix_perturbation(e.random_perturbation, e.L),
                                e.seed),
                  e.eps);
      SolverConfig cfg;
      cfg.dt = e.dt;
      cfg.t_end = 0.5;
      RunOptions opts;
      opts.diag_every = 1;
      opts.store_states = true;
      RunResult res = run(state0, cfg, opts);

      MatrixOutcome o;
      o.entry = e;
      o.entropy = verify_entropy_inequality(res.records, e.n);
      o.energy = verify_energy_inequality(res.records, e.n);
      o.min_h3 = std::numeric_limits<double>::infinity();
      for (const auto& r : res.records)
        o.min_h3 = std::min(o.min_h3, std::min(r.h3_plus, r.h3_minus));
      for (const auto& s : res.sampled_states) {
        const OscillationReport osc = verify_oscillation_bound(s);
        o.max_row_tv = std::max(o.max_row_tv, osc.max_row_tv);
        o.max_row_osc = std::max(o.max_row_osc, osc.max_row_osc);
        o.osc_bound = osc.bound;
      }
      out.push_back(std::move(o));
    }
    return out;
  }();
  return outcomes;
}

}  // namespace

std::vector<MatrixEntry> standard_test_matrix() {
  std::vector<MatrixEntry> entries;
  std::uint64_t seed = 2026;
  for (int n : {64, 128})
    for (double L : {0.5, 1.0})
      for (double eps : {0.1, 0.05, 0.025})
        for (bool random : {false, true})
          entries.push_back({n, L, eps, random, seed++, n == 64 ? 2.5e-3 : 1.25e-3});
  return entries;
}

PerturbationSpec matrix_perturbation(bool random, double L) {
  PerturbationSpec spec;
  spec.plus.push_back({1, 1, L / (8.0 * M_PI), 0.0});
  if (random) {
    spec.random_modes = 3;
    spec.random_amplitude = L / (16.0 * M_PI);
    spec.random_max_k = 3;
    spec.margin_budget = 0.25;
  }
  return spec;
}

// ---- criterion 1: Riesz operator suite -------------------------------------

CriterionResult criterion_riesz_suite() {
  CriterionResult res{"1 riesz operator suite", true, ""};
  double worst = 0.0;
  std::mt19937_64 rng(11);
  for (int n : {64, 128}) {
    const TorusGrid g(n, n);
    for (int trial = 0; trial < 100; ++trial) {
      const RealField f = random_nodal_field(g, rng);
      const RealField gg = random_nodal_field(g, rng);
      const SpectralCoeffs cf = forward_transform(f);
      const SpectralCoeffs cg = forward_transform(gg);
      for (int axis : {1, 2}) {
        // adjointness in the T^2 pairing (Parseval form)
        const std::complex<double> lhs = inner_product(riesz(cf, axis), cg);
        const std::complex<double> rhs = inner_product(cf, riesz(cg, axis));
        worst = std::max(worst, std::abs(lhs - rhs) / (l2_norm(f) * l2_norm(gg)));
        // mean mode annihilated
        worst = std::max(worst, std::abs(riesz(cf, axis).coeffs()[0]));
      }
      // commutation and derivative exchange
      worst = std::max(worst, max_abs_diff(riesz(riesz(cf, 1), 2), riesz(riesz(cf, 2), 1)));
      worst = std::max(worst, max_abs_diff(partial_derivative(riesz(cf, 2), 1),
                                           partial_derivative(riesz(cf, 1), 2)));
      // row-wise zero x1-mean of R1 g (complex field)
      const auto [re, im] = inverse_transform_complex(riesz(cg, 1));
      for (const std::vector<double>& means : {row_means(re), row_means(im)})
        for (double m : means) worst = std::max(worst, std::abs(m));
      // L2 contraction
      for (int axis : {1, 2})
        if (l2_norm(riesz(cf, axis)) > l2_norm(cf) * (1.0 + 1e-14)) res.pass = false;
    }
  }
  if (worst >= 1e-12) res.pass = false;
  res.detail = "max defect " + fmt(worst) + " (tol 1e-12), 100 fields at 64^2 and 128^2";
  return res;
}

// ---- criterion 2: sigma12 equivalence --------------------------------------

CriterionResult criterion_sigma12_equivalence() {
  CriterionResult res{"2 sigma12 spectral/direct equivalence", true, ""};
  const double c1 = c1_constant(LameParams(1.0, 1.0));
  if (c1 != 8.0 / 3.0) {
    res.pass = false;
    res.detail = "C1(1,1) != 8/3";
    return res;
  }
  const TorusGrid g(64, 64);
  std::mt19937_64 rng(22);
  const LameParams params[] = {{1.0, 1.0}, {0.0, 1.0}, {2.0, 0.7}, {-0.3, 1.0}};
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    RealField rho = random_field(g, rng, 1.0);
    const double mean = quadrature(rho);
    for (double& v : rho.values()) v -= mean;
    for (const LameParams& p : params) {
      const RealField s_spec = sigma12_spectral(rho, p);
      const DisplacementField u = solve_displacement(rho, p);
      const RealField s_dir = sigma12_direct(u, rho, p);
      worst = std::max(worst, max_abs_diff(s_spec, s_dir) / rho.max_abs());
    }
  }
  if (worst >= 1e-10) res.pass = false;
  res.detail = "C1(1,1) = 8/3 exact; max relative mismatch " + fmt(worst) +
               " (tol 1e-10) over 50 fields x 4 parameter sets";
  return res;
}

// ---- criteria 3/4/5/11: standard-matrix verdicts ----------------------------

CriterionResult criterion_entropy_inequality() {
  CriterionResult res{"3 entropy inequality on the standard matrix", true, ""};
  double worst_margin = -std::numeric_limits<double>::infinity();
  for (const MatrixOutcome& o : matrix_outcomes()) {
    if (!o.entropy.pass) res.pass = false;
    worst_margin = std::max(worst_margin, o.entropy.max_margin);
  }
  // refinement: matched single-mode pair (L=1, eps=0.05), balance residual
  double res64 = 0.0, res128 = 0.0;
  for (const MatrixOutcome& o : matrix_outcomes()) {
    if (!o.entry.random_perturbation && o.entry.L == 1.0 && o.entry.eps == 0.05) {
      if (o.entry.n == 64) res64 = o.entropy.balance_residual_max;
      if (o.entry.n == 128) res128 = o.entropy.balance_residual_max;
    }
  }
  const bool shrink = res64 > 0.0 && res128 <= 0.5 * res64;
  if (!shrink) res.pass = false;
  res.detail = "max signed margin " + fmt(worst_margin) + "; balance residual 64^2 " +
               fmt(res64) + " -> 128^2 " + fmt(res128) +
               (shrink ? " (>=2x shrink)" : " (shrink < 2x: FAIL)");
  return res;
}

CriterionResult criterion_energy_inequality() {
  CriterionResult res{"4 energy inequality and elastic Lyapunov decay", true, ""};
  double worst_margin = -std::numeric_limits<double>::infinity();
  double worst_rise = 0.0;
  for (const MatrixOutcome& o : matrix_outcomes()) {
    if (!o.energy.pass || !o.energy.elastic_monotone) res.pass = false;
    worst_margin = std::max(worst_margin, o.energy.max_margin);
    worst_rise = std::max(worst_rise, o.energy.elastic_max_rise);
  }
  // dissipation-balance residual under dt halving (fresh 64^2 pair)
  const TorusGrid grid(64, 64);
  DensityState state0 =
      mollify(build_initial(grid, 1.0, matrix_perturbation(false, 1.0), 7), 0.05);
  double residuals[2];
  for (int i = 0; i < 2; ++i) {
    SolverConfig cfg;
    cfg.dt = i == 0 ? 2.5e-3 : 1.25e-3;
    cfg.t_end = 0.5;
    RunOptions opts;
    opts.store_states = false;
    RunResult r = run(state0, cfg, opts);
    residuals[i] = verify_energy_inequality(r.records, 64).balance_residual_max;
  }
  const bool decreases = residuals[1] < residuals[0];
  if (!decreases) res.pass = false;
  res.detail = "max signed margin " + fmt(worst_margin) + ", max elastic rise " +
               fmt(worst_rise) + "; balance residual dt -> dt/2: " + fmt(residuals[0]) +
               " -> " + fmt(residuals[1]);
  return res;
}

CriterionResult criterion_monotonicity() {
  CriterionResult res{"5 monotonicity preserved; under-resolved run detected", true, ""};
  double min_h3 = std::numeric_limits<double>::infinity();
  for (const MatrixOutcome& o : matrix_outcomes()) min_h3 = std::min(min_h3, o.min_h3);
  if (!(min_h3 > 0.0)) res.pass = false;

  // constructed under-resolved run: margin starts at ~0, no dealiasing,
  // coarse grid; the sign condition must fail and be reported
  bool detected = false;
  try {
    const TorusGrid grid(16, 16);
    PerturbationSpec spec;
    spec.plus.push_back({1, 1, 0.999 / (2.0 * M_PI), 0.0});
    spec.minus.push_back({2, 1, -0.999 / (4.0 * M_PI), 1.0});
    DensityState state0 = build_initial(grid, 1.0, spec, 1);
    SolverConfig cfg;
    cfg.dt = 0.01;
    cfg.t_end = 5.0;
    cfg.dealias_products = false;
    RunOptions opts;
    opts.diag_every = 1 << 20;
    opts.store_states = false;
    run(state0, cfg, opts);
  } catch (const MonotonicityLostError&) {
    detected = true;
  }
  if (!detected) res.pass = false;
  res.detail = "min h3 margin over matrix " + fmt(min_h3) +
               (detected ? "; negative test raised MonotonicityLost"
                         : "; negative test did NOT trip");
  return res;
}

CriterionResult criterion_oscillation_bound() {
  CriterionResult res{"11 row-wise oscillation bound", true, ""};
  double worst_rel = 0.0;  // TV normalized by its own run's 2L bound
  for (const MatrixOutcome& o : matrix_outcomes()) {
    if (o.max_row_tv > o.osc_bound || o.max_row_osc > o.osc_bound) res.pass = false;
    worst_rel = std::max(worst_rel, std::max(o.max_row_tv, o.max_row_osc) / o.osc_bound);
  }
  res.detail = "max (row TV or oscillation) / (2L + 1e-8) = " + fmt(worst_rel) +
               " over every sample of every matrix run";
  return res;
}

// ---- criterion 6: invariant subspaces ---------------------------------------

CriterionResult criterion_invariant_subspaces() {
  CriterionResult res{"6 invariant subspaces", true, ""};
  const TorusGrid g(64, 64);
  std::ostringstream detail;

  // equal-pair data stays equal
  {
    PerturbationSpec spec;
    spec.plus.push_back({1, 1, 0.02, 0.3});
    spec.plus.push_back({2, 1, 0.01, 0.0});
    spec.minus = spec.plus;
    DensityState s0 = mollify(build_initial(g, 1.0, spec, 3), 0.05);
    SolverConfig cfg;
    cfg.dt = 2.5e-3;
    cfg.t_end = 1.0;
    RunOptions opts;
    opts.diag_every = 1 << 20;
    opts.store_states = false;
    RunResult r = run(s0, cfg, opts);
    const double d = r.final_state.rho_difference().max_abs();
    if (!(d < 1e-12)) res.pass = false;
    detail << "equal-pair |rho| " << fmt(d);
  }
  // x1-only data with eps = 0 is stationary
  {
    PerturbationSpec spec;
    spec.plus.push_back({1, 0, 0.03, 0.0});
    spec.plus.push_back({3, 0, 0.01, 0.7});
    spec.minus.push_back({2, 0, -0.02, 0.2});
    DensityState s0 = build_initial(g, 1.0, spec, 4);
    SolverConfig cfg;
    cfg.dt = 2.5e-3;
    cfg.t_end = 0.5;
    RunOptions opts;
    opts.diag_every = 1 << 20;
    opts.store_states = false;
    RunResult r = run(s0, cfg, opts);
    const double d = std::max(max_abs_diff(r.final_state.rho_plus_per, s0.rho_plus_per),
                              max_abs_diff(r.final_state.rho_minus_per, s0.rho_minus_per));
    if (!(d < 1e-10)) res.pass = false;
    detail << "; x1-only drift " << fmt(d);
  }
  // pure-linear data is a fixed point
  {
    DensityState s0 = mollify(build_initial(g, 1.0, {}, 5), 0.1);
    SolverConfig cfg;
    cfg.dt = 5e-3;
    cfg.t_end = 0.5;
    RunOptions opts;
    opts.diag_every = 1 << 20;
    opts.store_states = false;
    RunResult r = run(s0, cfg, opts);
    const double d = std::max(r.final_state.rho_plus_per.max_abs(),
                              r.final_state.rho_minus_per.max_abs());
    if (!(d < 1e-14)) res.pass = false;
    detail << "; pure-linear drift " << fmt(d);
  }
  res.detail = detail.str();
  return res;
}

// ---- criterion 7: Picard vs IMEX --------------------------------------------

CriterionResult criterion_picard_imex() {
  CriterionResult res{"7 picard/imex consistency", true, ""};
  const TorusGrid g(64, 64);
  DensityState s0 = mollify(build_initial(g, 1.0, matrix_perturbation(false, 1.0), 8), 0.1);

  SolverConfig cfg;
  cfg.picard.slab_T = 2e-3;
  cfg.picard.quad_points = 64;
  cfg.picard.tol = 1e-12;
  cfg.picard.max_iter = 40;
  cfg.dt = cfg.picard.slab_T / 128.0;
  cfg.t_end = cfg.picard.slab_T;

  PicardResult full = picard_mild_solve(s0, cfg);
  SolverConfig half = cfg;
  half.picard.quad_points = 32;
  PicardResult coarse = picard_mild_solve(s0, half);

  RunOptions opts;
  opts.diag_every = 1 << 20;
  opts.store_states = false;
  RunResult imex = run(s0, cfg, opts);
  SolverConfig cfg2 = cfg;
  cfg2.dt *= 2.0;
  RunResult imex2 = run(s0, cfg2, opts);

  auto dist = [](const DensityState& a, const DensityState& b) {
    RealField dp = a.rho_plus_per, dm = a.rho_minus_per;
    for (std::size_t i = 0; i < dp.values().size(); ++i) {
      dp.values()[i] -= b.rho_plus_per.values()[i];
      dm.values()[i] -= b.rho_minus_per.values()[i];
    }
    return std::sqrt(std::pow(l2_norm(dp), 2) + std::pow(l2_norm(dm), 2));
  };
  const double quad_est = dist(full.trajectory.back(), coarse.trajectory.back());
  const double step_est = dist(imex.final_state, imex2.final_state);
  const double discrepancy = dist(full.trajectory.back(), imex.final_state);
  const double budget = 10.0 * (quad_est + step_est) + 1e-13;

  double max_ratio = 0.0;
  bool geometric = !full.report.ratio_history.empty();
  for (std::size_t i = 0; i < full.report.ratio_history.size(); ++i) {
    max_ratio = std::max(max_ratio, full.report.ratio_history[i]);
    if (!(full.report.ratio_history[i] < 0.9)) geometric = false;
  }
  for (std::size_t i = 0; i + 1 < full.report.distance_history.size(); ++i)
    if (!(full.report.distance_history[i + 1] < full.report.distance_history[i]))
      geometric = false;

  if (!(max_ratio < 0.5) || !geometric || !(discrepancy <= budget)) res.pass = false;
  res.detail = "contraction ratio max " + fmt(max_ratio) + " (< 0.5), discrepancy " +
               fmt(discrepancy) + " <= budget " + fmt(budget) + ", " +
               std::to_string(full.report.iterations) + " iterations";
  return res;
}

// ---- criterion 8: vanishing-viscosity Cauchy trend ---------------------------

CriterionResult criterion_eps_cauchy() {
  CriterionResult res{"8 eps->0 Cauchy trend at 128^2", true, ""};
  const TorusGrid g(128, 128);
  DensityState base = build_initial(g, 1.0, matrix_perturbation(false, 1.0), 9);
  std::vector<DensityState> finals;
  // t_end chosen so the whole eps ladder sits in the asymptotic regime
  // (8 pi^2 eps t <= 0.8): at larger horizons the exact heat factors
  // e^{-8 pi^2 eps t} themselves have non-monotone consecutive differences
  for (double eps : {0.1, 0.05, 0.025, 0.0125}) {
    SolverConfig cfg;
    cfg.dt = 2.5e-3;
    cfg.t_end = 0.1;
    RunOptions opts;
    opts.diag_every = 1 << 20;
    opts.store_states = false;
    finals.push_back(run(mollify(base, eps), cfg, opts).final_state);
  }
  std::vector<double> dists;
  for (std::size_t i = 0; i + 1 < finals.size(); ++i) {
    RealField dp = finals[i].rho_plus_per, dm = finals[i].rho_minus_per;
    for (std::size_t j = 0; j < dp.values().size(); ++j) {
      dp.values()[j] -= finals[i + 1].rho_plus_per.values()[j];
      dm.values()[j] -= finals[i + 1].rho_minus_per.values()[j];
    }
    dists.push_back(std::sqrt(std::pow(l2_norm(dp), 2) + std::pow(l2_norm(dm), 2)));
  }
  std::ostringstream detail;
  detail << "consecutive distances";
  for (std::size_t i = 0; i < dists.size(); ++i) {
    detail << " " << fmt(dists[i]);
    if (i > 0 && !(dists[i] < dists[i - 1])) res.pass = false;
  }
  res.detail = detail.str() + (res.pass ? " (strictly decreasing)" : " (NOT decreasing)");
  return res;
}

// ---- criterion 9: Richardson order of IMEX_RK2 -------------------------------

CriterionResult criterion_scheme_order() {
  CriterionResult res{"9 IMEX_RK2 Richardson order", true, ""};
  const TorusGrid g(64, 64);
  DensityState s0 = mollify(build_initial(g, 1.0, matrix_perturbation(false, 1.0), 10), 0.05);
  std::vector<DensityState> finals;
  for (double dt : {4e-3, 2e-3, 1e-3}) {
    SolverConfig cfg;
    cfg.dt = dt;
    cfg.t_end = 0.2;
    cfg.scheme = Scheme::IMEX_RK2;
    RunOptions opts;
    opts.diag_every = 1 << 20;
    opts.store_states = false;
    finals.push_back(run(s0, cfg, opts).final_state);
  }
  auto dist = [](const DensityState& a, const DensityState& b) {
    RealField dp = a.rho_plus_per, dm = a.rho_minus_per;
    for (std::size_t i = 0; i < dp.values().size(); ++i) {
      dp.values()[i] -= b.rho_plus_per.values()[i];
      dm.values()[i] -= b.rho_minus_per.values()[i];
    }
    return std::sqrt(std::pow(l2_norm(dp), 2) + std::pow(l2_norm(dm), 2));
  };
  const double d1 = dist(finals[0], finals[1]);
  const double d2 = dist(finals[1], finals[2]);
  const double order = std::log2(d1 / d2);
  if (!(order >= 1.7 && order <= 2.3)) res.pass = false;
  res.detail = "estimated order " + fmt(order) + " (window [1.7, 2.3])";
  return res;
}

// ---- criterion 10: Orlicz layer ----------------------------------------------

CriterionResult criterion_orlicz_layer() {
  CriterionResult res{"10 orlicz layer", true, ""};
  std::ostringstream detail;

  // scalar root oracle for the constant field: u ln(e+u) = 1, norm = 1/u
  double lo = 0.1, hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mid * std::log(M_E + mid) < 1.0 ? lo : hi) = mid;
  }
  const double oracle_norm = 1.0 / lo;
  const TorusGrid g(64, 64);
  RealField ones(g);
  for (double& v : ones.values()) v = 1.0;
  const double lux_one = llogl_norm(ones);
  if (std::abs(lux_one - oracle_norm) > 1e-4) res.pass = false;
  detail << "constant-field norm " << fmt(lux_one) << " vs root oracle " << fmt(oracle_norm);

  // homogeneity, monotonicity, and the norm-integral bound on 100 random fields
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> cdist(0.1, 10.0);
  const YoungFunction A = YoungFunction::l_log_beta(1.0);
  double worst_homog = 0.0;
  bool bound_ok = true, mono_ok = true;
  for (int trial = 0; trial < 100; ++trial) {
    RealField f = random_field(g, rng, 1.0);
    for (double& v : f.values()) v *= 3.0;
    const double c = cdist(rng);
    const double nf = luxemburg_norm(f, A);
    RealField cf = f;
    for (double& v : cf.values()) v *= c;
    worst_homog = std::max(worst_homog, std::abs(luxemburg_norm(cf, A) - c * nf) /
                                            std::max(1.0, c * nf));
    // |f| <= |g| pointwise => norm(f) <= norm(g) + 1e-8
    RealField bigger = f;
    for (double& v : bigger.values()) v = std::abs(v) * 1.5 + 0.1;
    if (luxemburg_norm(f, A) > luxemburg_norm(bigger, A) + 1e-8) mono_ok = false;
    // inequality (3.1)
    double integral = 0.0;
    for (double v : f.values()) integral += A(std::abs(v));
    integral /= static_cast<double>(g.size());
    if (nf > 1.0 + integral + 1e-6) bound_ok = false;
  }
  if (worst_homog > 1e-6 || !bound_ok || !mono_ok) res.pass = false;
  detail << "; homogeneity defect " << fmt(worst_homog) << (bound_ok ? "" : "; (3.1) FAILED")
         << (mono_ok ? "" : "; monotonicity FAILED");
  res.detail = detail.str();
  return res;
}

std::vector<CriterionResult> run_acceptance_suite() {
  std::vector<CriterionResult> out;
  out.push_back(criterion_riesz_suite());
  out.push_back(criterion_sigma12_equivalence());
  out.push_back(criterion_entropy_inequality());
  out.push_back(criterion_energy_inequality());
  out.push_back(criterion_monotonicity());
  out.push_back(criterion_invariant_subspaces());
  out.push_back(criterion_picard_imex());
  out.push_back(criterion_eps_cauchy());
  out.push_back(criterion_scheme_order());
  out.push_back(criterion_orlicz_layer());
  out.push_back(criterion_oscillation_bound());
  return out;
}

}  // namespace gb2d
