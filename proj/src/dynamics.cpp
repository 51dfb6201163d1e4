#include "gb2d/dynamics.hpp"

#include <cmath>
#include <filesystem>

#include "gb2d/serialize.hpp"

namespace gb2d {

void SolverConfig::validate() const {
  if (!(dt > 0.0)) throw InvalidInputError("SolverConfig: dt must be > 0");
  if (!(t_end >= 0.0)) throw InvalidInputError("SolverConfig: t_end must be >= 0");
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0))
    throw InvalidInputError("SolverConfig: cfl_safety must lie in (0, 1]");
  if (!(picard.slab_T > 0.0)) throw InvalidInputError("SolverConfig: picard.slab_T must be > 0");
  if (picard.quad_points < 1)
    throw InvalidInputError("SolverConfig: picard.quad_points must be >= 1");
  if (!(picard.tol > 0.0)) throw InvalidInputError("SolverConfig: picard.tol must be > 0");
  if (picard.max_iter < 1) throw InvalidInputError("SolverConfig: picard.max_iter must be >= 1");
  if (!(picard.c0 > 0.0)) throw InvalidInputError("SolverConfig: picard.c0 must be > 0");
}

RealField velocity(const DensityState& state) {
  return riesz_composite(state.rho_difference(), 2, 2);
}

namespace {

// Spectral pair (plus_hat, minus_hat) used internally by the steppers.
struct SpectralPair {
  SpectralCoeffs plus;
  SpectralCoeffs minus;
};

SpectralPair to_spectral(const DensityState& s) {
  return {forward_transform(s.rho_plus_per), forward_transform(s.rho_minus_per)};
}

// Precomputed heat factors exp(-4 pi^2 |k|^2 tau) for one tau on one grid.
struct HeatFactors {
  std::vector<double> f;
  double tau = -1.0;
  int n1 = 0, n2 = 0;

  void prepare(const TorusGrid& g, double tau_new) {
    if (tau == tau_new && n1 == g.n1() && n2 == g.n2() && !f.empty()) return;
    tau = tau_new;
    n1 = g.n1();
    n2 = g.n2();
    f.resize(g.size());
    const double a = 4.0 * M_PI * M_PI * tau;
    for (int j2 = 0; j2 < g.n2(); ++j2) {
      const double k2 = g.k2(j2);
      for (int j1 = 0; j1 < g.n1(); ++j1) {
        const double k1 = g.k1(j1);
        f[g.index(j1, j2)] = std::exp(-a * (k1 * k1 + k2 * k2));
      }
    }
  }
  void apply(SpectralCoeffs& c) const {
    for (std::size_t i = 0; i < f.size(); ++i) c.coeffs()[i] *= f[i];
  }
  void apply(SpectralPair& p) const {
    apply(p.plus);
    apply(p.minus);
  }
};

SpectralCoeffs riesz22(const SpectralCoeffs& c) { return riesz_composite(c, 2, 2); }

// Transport right-hand side in spectral form.  Returns the pair of
// tendencies and the max |v| of the velocity it used.
SpectralPair tendency_hat(const SpectralPair& u, double slope_L, bool dealias_products,
                          double* vmax_out = nullptr) {
  const TorusGrid& g = u.plus.grid();
  SpectralCoeffs diff(g);
  for (std::size_t i = 0; i < diff.coeffs().size(); ++i)
    diff.coeffs()[i] = u.plus.coeffs()[i] - u.minus.coeffs()[i];
  SpectralCoeffs v_hat = riesz22(diff);
  SpectralCoeffs d1p_hat = partial_derivative(u.plus, 1);
  SpectralCoeffs d1m_hat = partial_derivative(u.minus, 1);
  if (dealias_products) {
    dealias_inplace(v_hat);
    dealias_inplace(d1p_hat);
    dealias_inplace(d1m_hat);
  }
  const RealField v = inverse_transform(v_hat);
  const RealField d1p = inverse_transform(d1p_hat);
  const RealField d1m = inverse_transform(d1m_hat);
  if (vmax_out) *vmax_out = v.max_abs();

  RealField tp(g), tm(g);
  for (std::size_t i = 0; i < tp.values().size(); ++i) {
    tp.values()[i] = -v.values()[i] * (d1p.values()[i] + slope_L);
    tm.values()[i] = +v.values()[i] * (d1m.values()[i] + slope_L);
  }
  if (!tp.all_finite() || !tm.all_finite())
    throw std::runtime_error("transport_tendency: non-finite tendency");
  SpectralPair out{forward_transform(tp), forward_transform(tm)};
  if (dealias_products) {
    dealias_inplace(out.plus);
    dealias_inplace(out.minus);
  }
  return out;
}

void axpy(SpectralPair& y, double a, const SpectralPair& x) {
  for (std::size_t i = 0; i < y.plus.coeffs().size(); ++i) {
    y.plus.coeffs()[i] += a * x.plus.coeffs()[i];
    y.minus.coeffs()[i] += a * x.minus.coeffs()[i];
  }
}

double nodal_min(const RealField& f) {
  double m = f.values()[0];
  for (double v : f.values()) m = std::min(m, v);
  return m;
}

// Integrating-factor RK step on the spectral pair.  E = exp(h eps Lap) is the
// exact heat factor; stages follow the Lawson transformation of the tableau.
SpectralPair lawson_step(const SpectralPair& u0, double h, double eps, double slope_L,
                         Scheme scheme, bool dealias_products) {
  const TorusGrid& g = u0.plus.grid();
  static thread_local HeatFactors E, E2;
  E.prepare(g, eps * h);

  if (scheme == Scheme::IMEX_RK2) {
    // Heun stages: u1 = E u0 + (h/2)(E K1 + K2), K2 = N(E(u0 + h K1))
    SpectralPair k1 = tendency_hat(u0, slope_L, dealias_products);
    SpectralPair stage = u0;
    axpy(stage, h, k1);
    E.apply(stage);
    SpectralPair k2 = tendency_hat(stage, slope_L, dealias_products);
    SpectralPair out = u0;
    axpy(out, 0.5 * h, k1);
    E.apply(out);
    axpy(out, 0.5 * h, k2);
    return out;
  }

  // classical RK4 through the integrating factor
  E2.prepare(g, eps * h * 0.5);
  SpectralPair k1 = tendency_hat(u0, slope_L, dealias_products);

  SpectralPair s2 = u0;
  axpy(s2, 0.5 * h, k1);
  E2.apply(s2);
  SpectralPair k2 = tendency_hat(s2, slope_L, dealias_products);

  SpectralPair s3 = u0;
  E2.apply(s3);
  axpy(s3, 0.5 * h, k2);
  SpectralPair k3 = tendency_hat(s3, slope_L, dealias_products);

  SpectralPair s4 = u0;
  E.apply(s4);
  SpectralPair k3e = k3;
  E2.apply(k3e);
  axpy(s4, h, k3e);
  SpectralPair k4 = tendency_hat(s4, slope_L, dealias_products);

  // u1 = E u0 + (h/6)(E K1 + 2 E2 K2 + 2 E2 K3 + K4)
  SpectralPair out = u0;
  axpy(out, h / 6.0, k1);
  E.apply(out);
  SpectralPair k23 = k2;
  axpy(k23, 1.0, k3);
  E2.apply(k23);
  axpy(out, h / 3.0, k23);
  axpy(out, h / 6.0, k4);
  return out;
}

DensityState from_spectral(const SpectralPair& u, const DensityState& like, double time) {
  return DensityState(inverse_transform(u.plus), inverse_transform(u.minus), like.slope_L,
                      like.epsilon, time);
}

double cfl_dt(const DensityState& state, const SolverConfig& cfg, double vmax) {
  const double hx = std::min(1.0 / state.grid().n1(), 1.0 / state.grid().n2());
  const double cap = cfg.cfl_safety * hx / std::max(vmax, 1e-30);
  return std::min(cfg.dt, cap);
}

void check_monotonicity(const DensityState& s) {
  const double margin = std::min(nodal_min(species_density(s, +1)),
                                 nodal_min(species_density(s, -1)));
  if (margin < 0.0)
    throw MonotonicityLostError(
        s.time, margin,
        "monotonicity lost at t=" + std::to_string(s.time) + " (margin " +
            std::to_string(margin) + "); the run is under-resolved");
}

}  // namespace

Tendency transport_tendency(const DensityState& state, bool dealias_products) {
  SpectralPair t = tendency_hat(to_spectral(state), state.slope_L, dealias_products);
  return Tendency{inverse_transform(t.plus), inverse_transform(t.minus)};
}

StepResult step_imex(const DensityState& state, const SolverConfig& cfg) {
  cfg.validate();
  const RealField v = velocity(state);
  const double vmax = v.max_abs();
  const double h = cfl_dt(state, cfg, vmax);
  const SpectralPair u0 = to_spectral(state);
  const SpectralPair u1 =
      lawson_step(u0, h, state.epsilon, state.slope_L, cfg.scheme, cfg.dealias_products);
  DensityState next = from_spectral(u1, state, state.time + h);
  check_monotonicity(next);
  return StepResult{std::move(next), h, vmax};
}

double estimate_tstar(const DensityState& state, double c0) {
  if (!(c0 > 0.0)) throw InvalidInputError("estimate_tstar: c0 must be > 0");
  const double norm = w132_norm_pair(state.rho_plus_per, state.rho_minus_per);
  const double branch1 = 1.0 / (2.0 * c0 * state.slope_L);
  const double quarter =
      norm > 0.0 ? std::min(branch1, 1.0 / (16.0 * c0 * norm)) : branch1;
  return quarter * quarter * quarter * quarter;
}

PicardResult picard_mild_solve(const DensityState& state0, const SolverConfig& cfg) {
  cfg.validate();
  if (!(state0.epsilon > 0.0))
    throw InvalidInputError("picard_mild_solve: requires eps > 0 (mollified data)");
  const TorusGrid& g = state0.grid();
  const int Q = cfg.picard.quad_points;
  const double T = cfg.picard.slab_T;
  const double h = T / Q;
  const double L = state0.slope_L;
  const double eps = state0.epsilon;

  PicardReport report;
  report.tstar_estimate = estimate_tstar(state0, cfg.picard.c0);
  report.slab_exceeds_tstar = T > report.tstar_estimate;

  // heat factors at half-step granularity: S_eps(m h/2), m = 0..2Q
  std::vector<HeatFactors> S(2 * Q + 1);
  for (int m = 0; m <= 2 * Q; ++m) S[m].prepare(g, eps * 0.5 * h * m);

  const SpectralPair u0 = to_spectral(state0);

  // free evolution x0_j = S(t_j) u0
  std::vector<SpectralPair> x0;
  x0.reserve(Q + 1);
  for (int j = 0; j <= Q; ++j) {
    SpectralPair xj = u0;
    S[2 * j].apply(xj);
    x0.push_back(std::move(xj));
  }

  auto duhamel = [&](const std::vector<SpectralPair>& x) {
    // midpoint-kernel quadrature: integrand G at the averaged state of each
    // sub-interval, semigroup evaluated at the midpoint offset
    std::vector<SpectralPair> G;
    G.reserve(Q);
    for (int m = 0; m < Q; ++m) {
      SpectralPair mid = x[m];
      axpy(mid, 1.0, x[m + 1]);
      for (std::size_t i = 0; i < mid.plus.coeffs().size(); ++i) {
        mid.plus.coeffs()[i] *= 0.5;
        mid.minus.coeffs()[i] *= 0.5;
      }
      G.push_back(tendency_hat(mid, L, cfg.dealias_products));
    }
    std::vector<SpectralPair> out = x0;
    for (int j = 1; j <= Q; ++j) {
      for (int m = 0; m < j; ++m) {
        SpectralPair term = G[m];
        // t_j - s_{m+1/2} = (2j - 2m - 1) * h/2
        S[2 * j - 2 * m - 1].apply(term);
        axpy(out[j], h, term);
      }
    }
    return out;
  };

  auto distance = [&](const std::vector<SpectralPair>& a, const std::vector<SpectralPair>& b) {
    double d = 0.0;
    for (int j = 0; j <= Q; ++j) {
      SpectralCoeffs dp(g), dm(g);
      for (std::size_t i = 0; i < dp.coeffs().size(); ++i) {
        dp.coeffs()[i] = a[j].plus.coeffs()[i] - b[j].plus.coeffs()[i];
        dm.coeffs()[i] = a[j].minus.coeffs()[i] - b[j].minus.coeffs()[i];
      }
      d = std::max(d, w132_norm_pair(inverse_transform(dp), inverse_transform(dm)));
    }
    return d;
  };

  std::vector<SpectralPair> x = x0;
  bool converged = false;
  for (int it = 1; it <= cfg.picard.max_iter; ++it) {
    std::vector<SpectralPair> next = duhamel(x);
    const double d = distance(next, x);
    report.distance_history.push_back(d);
    if (report.distance_history.size() >= 2) {
      const double prev = report.distance_history[report.distance_history.size() - 2];
      report.ratio_history.push_back(prev > 0.0 ? d / prev : 0.0);
    }
    x = std::move(next);
    report.iterations = it;
    if (d < cfg.picard.tol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw NonContractiveError(report.ratio_history,
                              "picard_mild_solve: no contraction after " +
                                  std::to_string(cfg.picard.max_iter) +
                                  " iterations; slab_T likely exceeds the contraction regime");
  report.converged = true;

  PicardResult result;
  result.report = report;
  result.trajectory.reserve(Q + 1);
  for (int j = 0; j <= Q; ++j) {
    DensityState s = from_spectral(x[j], state0, state0.time + j * h);
    result.trajectory.push_back(std::move(s));
  }
  return result;
}

RunResult run(const DensityState& state0, const SolverConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  if (opts.diag_every < 1) throw InvalidInputError("run: diag_every must be >= 1");
  {
    const HypothesisReport rep = check_hypotheses(state0);
    if (state0.epsilon > 0.0 && !(rep.h3_margin() > 0.0))
      throw InvalidInputError("run: initial data must be strictly monotone for eps > 0 (margin " +
                              std::to_string(rep.h3_margin()) + ")");
    if (rep.h3_margin() < 0.0)
      throw InvalidInputError("run: initial data violates the monotonicity hypothesis");
  }

  RunResult out{.records = {}, .sampled_states = {}, .dt_history = {}, .final_state = state0};
  auto emit = [&](const DensityState& s) {
    const DiagnosticsRecord* prev = out.records.empty() ? nullptr : &out.records.back();
    out.records.push_back(record(s, prev, opts.diag));
    if (opts.store_states) out.sampled_states.push_back(s);
    if (!opts.checkpoint_dir.empty() && opts.checkpoint_every > 0 &&
        out.records.size() % opts.checkpoint_every == 0) {
      save_state(s, opts.checkpoint_dir + "/checkpoint_" +
                        std::to_string(out.records.size()) + ".state");
    }
  };

  DensityState state = state0;
  emit(state);
  const double t_final = state0.time + cfg.t_end;
  int step_count = 0;
  while (state.time < t_final - 1e-14) {
    SolverConfig step_cfg = cfg;
    step_cfg.dt = std::min(cfg.dt, t_final - state.time);
    StepResult sr{state, 0.0, 0.0};
    try {
      sr = step_imex(state, step_cfg);
    } catch (const MonotonicityLostError&) {
      if (!opts.checkpoint_dir.empty())
        save_state(state, opts.checkpoint_dir + "/last_good.state");
      throw;
    }
    state = std::move(sr.state);
    out.dt_history.push_back(sr.dt_taken);
    ++step_count;
    if (step_count % opts.diag_every == 0 || !(state.time < t_final - 1e-14)) emit(state);
  }
  out.final_state = state;
  return out;
}

}  // namespace gb2d
