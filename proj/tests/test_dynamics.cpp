#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "gb2d/dynamics.hpp"
#include "gb2d/serialize.hpp"
#include "helpers.hpp"

using namespace gb2d;
using namespace gb2d::testing;

namespace {

DensityState single_mode_state(const TorusGrid& g, double L, double amp_scale = 1.0) {
  PerturbationSpec spec;
  spec.plus.push_back({1, 1, amp_scale * L / (8.0 * M_PI), 0.0});
  return build_initial(g, L, spec, 0);
}

double state_distance(const DensityState& a, const DensityState& b) {
  RealField dp = a.rho_plus_per, dm = a.rho_minus_per;
  for (std::size_t i = 0; i < dp.values().size(); ++i) {
    dp.values()[i] -= b.rho_plus_per.values()[i];
    dm.values()[i] -= b.rho_minus_per.values()[i];
  }
  return std::sqrt(std::pow(l2_norm(dp), 2) + std::pow(l2_norm(dm), 2));
}

}  // namespace

TEST_CASE("velocity: equal pair and x1-only data give zero; sin sin gives rho/4") {
  const TorusGrid g(32, 32);
  PerturbationSpec spec;
  spec.plus.push_back({2, 1, 0.05, 0.4});
  spec.minus = spec.plus;
  CHECK(velocity(build_initial(g, 1.0, spec, 0)).max_abs() == 0.0);

  PerturbationSpec x1spec;
  x1spec.plus.push_back({1, 0, 0.05, 0.0});
  x1spec.minus.push_back({2, 0, 0.02, 0.0});
  CHECK(velocity(build_initial(g, 1.0, x1spec, 0)).max_abs() < 1e-15);

  PerturbationSpec ss;
  ss.plus.push_back({1, 1, 0.03, 0.0});  // sin(2 pi (x1 + x2)) has |multiplier| 1/4
  const DensityState s = build_initial(g, 1.0, ss, 0);
  RealField expect = s.rho_plus_per;
  for (double& v : expect.values()) v *= 0.25;
  CHECK(max_abs_diff(velocity(s), expect) < 1e-14);
}

TEST_CASE("transport tendency vanishes on the invariant families") {
  const TorusGrid g(32, 32);
  const DensityState flat = build_initial(g, 1.0, {}, 0);
  const Tendency t0 = transport_tendency(flat);
  CHECK(t0.d_rho_plus_per.max_abs() == 0.0);
  CHECK(t0.d_rho_minus_per.max_abs() == 0.0);

  PerturbationSpec x1spec;
  x1spec.plus.push_back({1, 0, 0.05, 0.0});
  x1spec.minus.push_back({1, 0, 0.02, 0.3});
  const Tendency t1 = transport_tendency(build_initial(g, 1.0, x1spec, 0));
  CHECK(t1.d_rho_plus_per.max_abs() < 1e-14);
  CHECK(t1.d_rho_minus_per.max_abs() < 1e-14);
}

TEST_CASE("equal-pair data stays equal over a hundred steps") {
  const TorusGrid g(32, 32);
  PerturbationSpec spec;
  spec.plus.push_back({1, 1, 0.02, 0.0});
  spec.plus.push_back({2, 1, 0.015, 0.9});
  spec.minus = spec.plus;
  DensityState s = mollify(build_initial(g, 1.0, spec, 0), 0.05);
  SolverConfig cfg;
  cfg.dt = 2e-3;
  for (int i = 0; i < 100; ++i) s = step_imex(s, cfg).state;
  CHECK(s.rho_difference().max_abs() < 1e-12);
}

TEST_CASE("pure-linear data is an exact fixed point of the stepper") {
  const TorusGrid g(32, 32);
  for (double eps : {0.0, 0.1}) {
    DensityState s = build_initial(g, 1.0, {}, 0);
    if (eps > 0) s = mollify(s, eps);
    SolverConfig cfg;
    cfg.dt = 5e-3;
    for (Scheme scheme : {Scheme::IMEX_RK2, Scheme::IMEX_RK4}) {
      cfg.scheme = scheme;
      const DensityState next = step_imex(s, cfg).state;
      CHECK(next.rho_plus_per.max_abs() == 0.0);
      CHECK(next.rho_minus_per.max_abs() == 0.0);
    }
  }
}

TEST_CASE("with zero velocity the stiff part is integrated exactly") {
  // equal-pair single mode: v = 0 forever, the mode obeys pure heat decay
  const TorusGrid g(32, 32);
  PerturbationSpec spec;
  spec.plus.push_back({1, 0, 0.01, 0.0});
  spec.minus = spec.plus;
  DensityState s = mollify(build_initial(g, 1.0, spec, 0), 0.1);
  const RealField initial = s.rho_plus_per;
  SolverConfig cfg;
  cfg.dt = 1e-2;
  const double t_total = 0.1;
  const int steps = static_cast<int>(t_total / cfg.dt);
  for (int i = 0; i < steps; ++i) s = step_imex(s, cfg).state;
  const double factor = std::exp(-4.0 * M_PI * M_PI * s.epsilon * t_total);
  RealField expect = initial;
  for (double& v : expect.values()) v *= factor;
  CHECK(max_abs_diff(s.rho_plus_per, expect) < 1e-10);
}

TEST_CASE("cfl reduces the step and reports what was taken") {
  const TorusGrid g(32, 32);
  DensityState s = mollify(single_mode_state(g, 1.0), 0.05);
  SolverConfig cfg;
  cfg.dt = 10.0;  // absurd request; CFL must cap it
  const StepResult r = step_imex(s, cfg);
  CHECK(r.dt_taken < 10.0);
  CHECK(r.dt_taken == doctest::Approx(cfg.cfl_safety * (1.0 / 32) / r.vmax));
  CHECK(r.vmax > 0.0);
}

TEST_CASE("trajectory differences scale as dt^2 (RK2) and dt^4 (RK4)") {
  const TorusGrid g(32, 32);
  DensityState s0 = mollify(single_mode_state(g, 1.0, 2.0), 0.05);
  for (auto [scheme, expected_order] :
       {std::pair{Scheme::IMEX_RK2, 2.0}, {Scheme::IMEX_RK4, 4.0}}) {
    std::vector<DensityState> finals;
    const double base_dt = scheme == Scheme::IMEX_RK2 ? 4e-3 : 1.6e-2;
    for (double dt : {base_dt, base_dt / 2, base_dt / 4}) {
      SolverConfig cfg;
      cfg.dt = dt;
      cfg.t_end = 0.32;
      cfg.scheme = scheme;
      RunOptions opts;
      opts.diag_every = 1 << 20;
      opts.store_states = false;
      finals.push_back(run(s0, cfg, opts).final_state);
    }
    const double d1 = state_distance(finals[0], finals[1]);
    const double d2 = state_distance(finals[1], finals[2]);
    const double ratio = d1 / d2;
    const double expected = std::pow(2.0, expected_order);
    CHECK(ratio > expected / 1.5);
    CHECK(ratio < expected * 1.5);
  }
}

TEST_CASE("t* estimate: closed form, scaling in c0, monotonicity in the data") {
  const TorusGrid g(32, 32);
  const DensityState flat = build_initial(g, 1.0, {}, 0);
  CHECK(estimate_tstar(flat, 1.0) == doctest::Approx(1.0 / 16).epsilon(1e-14));
  CHECK(estimate_tstar(flat, 2.0) == doctest::Approx(1.0 / 256).epsilon(1e-12));

  const DensityState small = single_mode_state(g, 1.0, 0.5);
  const DensityState large = single_mode_state(g, 1.0, 2.0);
  CHECK(estimate_tstar(large, 1.0) <= estimate_tstar(small, 1.0));
  CHECK_THROWS_AS(estimate_tstar(flat, 0.0), InvalidInputError);
}

TEST_CASE("picard on pure-linear data converges immediately to the constant solution") {
  const TorusGrid g(32, 32);
  DensityState s0 = mollify(build_initial(g, 1.0, {}, 0), 0.1);
  SolverConfig cfg;
  cfg.picard.slab_T = 0.01;
  cfg.picard.quad_points = 8;
  PicardResult res = picard_mild_solve(s0, cfg);
  CHECK(res.report.iterations == 1);
  CHECK(res.report.converged);
  for (const DensityState& s : res.trajectory) {
    CHECK(s.rho_plus_per.max_abs() == 0.0);
    CHECK(s.rho_minus_per.max_abs() == 0.0);
  }
}

TEST_CASE("picard contracts geometrically below t* and matches the stepper") {
  const TorusGrid g(32, 32);
  DensityState s0 = mollify(single_mode_state(g, 1.0), 0.1);
  SolverConfig cfg;
  cfg.picard.slab_T = 2e-3;
  cfg.picard.quad_points = 64;
  cfg.picard.tol = 1e-12;
  PicardResult full = picard_mild_solve(s0, cfg);
  CHECK(full.report.converged);
  for (double r : full.report.ratio_history) CHECK(r < 1.0);
  for (std::size_t i = 0; i + 1 < full.report.distance_history.size(); ++i)
    CHECK(full.report.distance_history[i + 1] < full.report.distance_history[i]);

  SolverConfig half = cfg;
  half.picard.quad_points = 32;
  PicardResult coarse = picard_mild_solve(s0, half);
  const double quad_est = state_distance(full.trajectory.back(), coarse.trajectory.back());

  SolverConfig imex_cfg = cfg;
  imex_cfg.t_end = cfg.picard.slab_T;
  imex_cfg.dt = cfg.picard.slab_T / 128;
  RunOptions opts;
  opts.diag_every = 1 << 20;
  opts.store_states = false;
  const RunResult imex = run(s0, imex_cfg, opts);
  SolverConfig imex2 = imex_cfg;
  imex2.dt *= 2;
  const double step_est = state_distance(imex.final_state, run(s0, imex2, opts).final_state);

  const double disc = state_distance(full.trajectory.back(), imex.final_state);
  CHECK(disc <= 10 * (quad_est + step_est) + 1e-13);

  // the agreement holds along the slab, not just at its end
  SolverConfig half_slab = imex_cfg;
  half_slab.t_end = cfg.picard.slab_T / 2;
  const RunResult imex_mid = run(s0, half_slab, opts);
  const DensityState& picard_mid = full.trajectory[full.trajectory.size() / 2];
  CHECK(state_distance(picard_mid, imex_mid.final_state) <=
        10 * (quad_est + step_est) + 1e-13);
}

TEST_CASE("picard requires viscosity and reports non-contraction") {
  const TorusGrid g(32, 32);
  const DensityState inviscid = single_mode_state(g, 1.0);
  SolverConfig cfg;
  CHECK_THROWS_AS(picard_mild_solve(inviscid, cfg), InvalidInputError);

  // far beyond the contraction regime: the tolerance is unreachable within
  // max_iter and the ratio history is surfaced
  DensityState s0 = mollify(single_mode_state(g, 1.0, 2.0), 0.01);
  SolverConfig wild;
  wild.picard.slab_T = 5.0;
  wild.picard.quad_points = 16;
  wild.picard.max_iter = 8;
  wild.picard.tol = 1e-12;
  CHECK_THROWS_AS(picard_mild_solve(s0, wild), NonContractiveError);
  try {
    picard_mild_solve(s0, wild);
  } catch (const NonContractiveError& e) {
    CHECK(!e.ratio_history.empty());
  }
}

TEST_CASE("run: t_end = 0 emits exactly the initial record") {
  const TorusGrid g(32, 32);
  DensityState s0 = mollify(single_mode_state(g, 1.0), 0.05);
  SolverConfig cfg;
  cfg.t_end = 0.0;
  const RunResult res = run(s0, cfg);
  CHECK(res.records.size() == 1);
  CHECK(res.records[0].time == 0.0);
  CHECK(res.final_state.time == 0.0);
}

TEST_CASE("run rejects inadmissible data and propagates monotonicity loss") {
  const TorusGrid g(16, 16);
  // negative margin: inadmissible for any viscosity
  RealField plus = RealField::from_function(g, [](double x1, double) {
    return 1.000001 * std::sin(2 * M_PI * x1) / (2 * M_PI);
  });
  DensityState bad(std::move(plus), RealField(g), 1.0, 0.1, 0.0);
  SolverConfig cfg;
  CHECK_THROWS_AS(run(bad, cfg), InvalidInputError);
  bad.epsilon = 0.0;
  CHECK_THROWS_AS(run(bad, cfg), InvalidInputError);

  // an under-resolved inviscid run loses the sign condition eventually
  PerturbationSpec spec;
  spec.plus.push_back({1, 1, 0.999 / (2.0 * M_PI), 0.0});
  spec.minus.push_back({2, 1, -0.999 / (4.0 * M_PI), 1.0});
  DensityState s0 = build_initial(g, 1.0, spec, 1);
  SolverConfig wild;
  wild.dt = 0.01;
  wild.t_end = 5.0;
  wild.dealias_products = false;
  RunOptions opts;
  opts.diag_every = 1 << 20;
  opts.store_states = false;
  CHECK_THROWS_AS(run(s0, wild, opts), MonotonicityLostError);
}

TEST_CASE("runs are deterministic: identical inputs give bit-identical states") {
  const TorusGrid g(32, 32);
  PerturbationSpec spec;
  spec.plus.push_back({1, 1, 0.02, 0.0});
  spec.random_modes = 2;
  spec.random_amplitude = 0.01;
  SolverConfig cfg;
  cfg.dt = 2e-3;
  cfg.t_end = 0.05;
  RunOptions opts;
  opts.store_states = false;
  const RunResult a = run(mollify(build_initial(g, 1.0, spec, 5), 0.05), cfg, opts);
  const RunResult b = run(mollify(build_initial(g, 1.0, spec, 5), 0.05), cfg, opts);
  CHECK(max_abs_diff(a.final_state.rho_plus_per, b.final_state.rho_plus_per) == 0.0);
  CHECK(max_abs_diff(a.final_state.rho_minus_per, b.final_state.rho_minus_per) == 0.0);
}

TEST_CASE("x1-mean profiles are conserved for x2-independent inviscid data") {
  const TorusGrid g(32, 32);
  PerturbationSpec spec;
  spec.plus.push_back({2, 0, 0.03, 0.1});
  DensityState s0 = build_initial(g, 1.0, spec, 0);
  SolverConfig cfg;
  cfg.dt = 2e-3;
  cfg.t_end = 0.1;
  RunOptions opts;
  opts.diag_every = 1 << 20;
  opts.store_states = false;
  const RunResult res = run(s0, cfg, opts);
  const auto m0 = row_means(s0.rho_plus_per);
  const auto m1 = row_means(res.final_state.rho_plus_per);
  for (std::size_t j = 0; j < m0.size(); ++j) CHECK(std::abs(m1[j] - m0[j]) < 1e-12);
}

TEST_CASE("velocity rows have zero x1-mean (the forcing integrates out)") {
  const TorusGrid g(32, 32);
  std::mt19937_64 rng(30);
  PerturbationSpec spec;
  spec.plus.push_back({1, 1, 0.02, 0.0});
  spec.plus.push_back({2, 3, 0.005, 1.1});
  spec.minus.push_back({1, 2, -0.01, 0.4});
  const DensityState s = build_initial(g, 1.0, spec, 31);
  for (double m : row_means(velocity(s))) CHECK(std::abs(m) < 1e-12);
}

TEST_CASE("picard warns (not errors) when the slab exceeds the t* estimate") {
  const TorusGrid g(32, 32);
  DensityState s0 = mollify(single_mode_state(g, 1.0), 0.05);
  SolverConfig cfg;
  cfg.picard.slab_T = 0.5;  // far above t*, still convergent
  cfg.picard.quad_points = 16;
  cfg.picard.max_iter = 60;
  cfg.picard.tol = 1e-10;
  const PicardResult res = picard_mild_solve(s0, cfg);
  CHECK(res.report.slab_exceeds_tstar);
  CHECK(res.report.tstar_estimate < 0.5);
  CHECK(res.report.converged);
}

TEST_CASE("checkpoints are written at the configured cadence and on failure") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "gb2d_ckpt_test";
  fs::remove_all(dir);
  fs::create_directories(dir);

  const TorusGrid g(32, 32);
  DensityState s0 = mollify(single_mode_state(g, 1.0), 0.05);
  SolverConfig cfg;
  cfg.dt = 5e-3;
  cfg.t_end = 0.05;
  RunOptions opts;
  opts.diag_every = 1;
  opts.store_states = false;
  opts.checkpoint_dir = dir.string();
  opts.checkpoint_every = 4;
  run(s0, cfg, opts);
  CHECK(fs::exists(dir / "checkpoint_4.state"));
  CHECK(fs::exists(dir / "checkpoint_8.state"));
  const DensityState back = load_state((dir / "checkpoint_4.state").string());
  CHECK(back.grid().n1() == 32);
  fs::remove_all(dir);

  // on monotonicity loss the last good state is checkpointed
  fs::create_directories(dir);
  PerturbationSpec spec;
  spec.plus.push_back({1, 1, 0.999 / (2.0 * M_PI), 0.0});
  spec.minus.push_back({2, 1, -0.999 / (4.0 * M_PI), 1.0});
  DensityState bad0 = build_initial(TorusGrid(16, 16), 1.0, spec, 1);
  SolverConfig wild;
  wild.dt = 0.01;
  wild.t_end = 5.0;
  wild.dealias_products = false;
  RunOptions wopts;
  wopts.diag_every = 1 << 20;
  wopts.store_states = false;
  wopts.checkpoint_dir = dir.string();
  CHECK_THROWS_AS(run(bad0, wild, wopts), MonotonicityLostError);
  CHECK(fs::exists(dir / "last_good.state"));
  fs::remove_all(dir);
}
