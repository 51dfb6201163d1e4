#include "gb2d/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "gb2d/orlicz.hpp"

namespace gb2d {

namespace {

double nodal_min(const RealField& f) {
  double m = f.values()[0];
  for (double v : f.values()) m = std::min(m, v);
  return m;
}

double l1_norm(const RealField& f) {
  long double s = 0.0L;
  for (double v : f.values()) s += std::abs(static_cast<long double>(v));
  return static_cast<double>(s / static_cast<long double>(f.grid().size()));
}

void trapezoid_extend(double& cum, double prev_rate, double rate, double dt) {
  cum += 0.5 * (prev_rate + rate) * dt;
}

}  // namespace

DiagnosticsRecord record(const DensityState& state, const DiagnosticsRecord* prev,
                         const DiagnosticsOptions& opts) {
  DiagnosticsRecord r;
  r.time = state.time;
  const TorusGrid& g = state.grid();
  const double floor = entropy_floor(state);

  const RealField theta_p = species_density(state, +1);
  const RealField theta_m = species_density(state, -1);

  long clamp_p = 0, clamp_m = 0;
  r.entropy_N = entropy_density_integral(theta_p, floor, &clamp_p) +
                entropy_density_integral(theta_m, floor, &clamp_m);
  r.clamp_count = clamp_p + clamp_m;

  // dissipation rate quad((R1R2 theta)^2), theta = theta+ - theta- = d1(rho+ - rho-)
  const RealField rho = state.rho_difference();
  const SpectralCoeffs rho_hat = forward_transform(rho);
  const SpectralCoeffs theta_hat = partial_derivative(rho_hat, 1);
  const RealField r1r2_theta = inverse_transform(riesz_composite(theta_hat, 1, 1));
  {
    long double s = 0.0L;
    for (double v : r1r2_theta.values()) s += static_cast<long double>(v) * v;
    r.dissipation_rate = static_cast<double>(s / static_cast<long double>(g.size()));
  }

  // viscous entropy dissipation eps * sum quad(|grad theta|^2 / theta)
  if (state.epsilon > 0.0) {
    long double s = 0.0L;
    for (const RealField* theta : {&theta_p, &theta_m}) {
      const RealField gm = gradient_magnitude(*theta);
      for (std::size_t i = 0; i < gm.values().size(); ++i) {
        const double t = std::max(theta->values()[i], floor);
        s += static_cast<long double>(gm.values()[i]) * gm.values()[i] / t;
      }
    }
    r.visc_entropy_rate = static_cast<double>(state.epsilon * s / static_cast<long double>(g.size()));
  }

  // energy (1/2) quad((R1R2 rho)^2) and its flux/viscous rates
  const RealField r1r2_rho = inverse_transform(riesz_composite(rho_hat, 1, 1));
  {
    long double s = 0.0L;
    for (double v : r1r2_rho.values()) s += static_cast<long double>(v) * v;
    r.energy_E = static_cast<double>(0.5L * s / static_cast<long double>(g.size()));
  }
  const RealField v = inverse_transform(riesz_composite(rho_hat, 2, 2));
  {
    long double s = 0.0L;
    for (std::size_t i = 0; i < v.values().size(); ++i)
      s += static_cast<long double>(v.values()[i]) * v.values()[i] *
           (theta_p.values()[i] + theta_m.values()[i]);
    r.energy_flux_rate = static_cast<double>(s / static_cast<long double>(g.size()));
  }
  if (state.epsilon > 0.0) {
    const RealField gm = gradient_magnitude(r1r2_rho);
    long double s = 0.0L;
    for (double w : gm.values()) s += static_cast<long double>(w) * w;
    r.energy_visc_rate = static_cast<double>(state.epsilon * s / static_cast<long double>(g.size()));
  }

  if (opts.with_elastic) {
    const DisplacementField u = solve_displacement(rho, opts.lame);
    r.elastic_E = elastic_energy(u, rho, opts.lame);
  }

  r.l2_plus = l2_norm(state.rho_plus_per);
  r.l2_minus = l2_norm(state.rho_minus_per);
  r.llogl_plus = llogl_norm(theta_p);
  r.llogl_minus = llogl_norm(theta_m);
  r.h3_plus = nodal_min(theta_p);
  r.h3_minus = nodal_min(theta_m);
  r.velocity_w12 = w12_norm(v);

  // full right-hand sides -+ v*theta^{+-} + eps Lap rho^{+-,per}
  for (int sp : {+1, -1}) {
    const RealField& theta = sp > 0 ? theta_p : theta_m;
    const RealField& per = sp > 0 ? state.rho_plus_per : state.rho_minus_per;
    RealField rhs(g);
    if (state.epsilon > 0.0) {
      SpectralCoeffs lap = forward_transform(per);
      for (int j2 = 0; j2 < g.n2(); ++j2) {
        const double k2 = g.k2(j2);
        for (int j1 = 0; j1 < g.n1(); ++j1) {
          const double k1 = g.k1(j1);
          lap(j1, j2) *= -4.0 * M_PI * M_PI * (k1 * k1 + k2 * k2);
        }
      }
      rhs = inverse_transform(lap);
      for (double& w : rhs.values()) w *= state.epsilon;
    }
    for (std::size_t i = 0; i < rhs.values().size(); ++i)
      rhs.values()[i] += -sp * v.values()[i] * theta.values()[i];
    (sp > 0 ? r.tendency_l1_plus : r.tendency_l1_minus) = l1_norm(rhs);
  }

  if (opts.with_profiles) {
    r.mean_plus = row_means(state.rho_plus_per);
    r.mean_minus = row_means(state.rho_minus_per);
    const RealField w = inverse_transform(riesz_composite(theta_hat, 2, 2));
    r.i_plus.assign(g.n2(), 0.0);
    r.i_minus.assign(g.n2(), 0.0);
    for (int j2 = 0; j2 < g.n2(); ++j2) {
      double sp = 0.0, sm = 0.0;
      for (int j1 = 0; j1 < g.n1(); ++j1) {
        const double wij = w(j1, j2);
        sp += wij * (state.rho_plus_per(j1, j2) - r.mean_plus[j2]);
        sm += wij * (state.rho_minus_per(j1, j2) - r.mean_minus[j2]);
      }
      r.i_plus[j2] = sp / g.n1();
      r.i_minus[j2] = -sm / g.n1();
    }
  }

  if (prev) {
    const double dt = r.time - prev->time;
    r.dissipation_cum = prev->dissipation_cum;
    r.visc_entropy_cum = prev->visc_entropy_cum;
    r.energy_flux_cum = prev->energy_flux_cum;
    r.energy_visc_cum = prev->energy_visc_cum;
    if (dt > 0.0) {
      trapezoid_extend(r.dissipation_cum, prev->dissipation_rate, r.dissipation_rate, dt);
      trapezoid_extend(r.visc_entropy_cum, prev->visc_entropy_rate, r.visc_entropy_rate, dt);
      trapezoid_extend(r.energy_flux_cum, prev->energy_flux_rate, r.energy_flux_rate, dt);
      trapezoid_extend(r.energy_visc_cum, prev->energy_visc_rate, r.energy_visc_rate, dt);
    }
  }
  return r;
}

EntropyReport verify_entropy_inequality(const std::vector<DiagnosticsRecord>& records,
                                        int grid_min_n, double c_tol_rel) {
  if (records.size() < 2)
    throw InvalidInputError("verify_entropy_inequality: need at least 2 records");
  EntropyReport rep;
  const double n0 = records[0].entropy_N;
  const double c_tol = c_tol_rel * (std::abs(n0) + 1.0);
  const double proxy = 1.0 / grid_min_n;
  rep.max_margin = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < records.size(); ++n) {
    const DiagnosticsRecord& r = records[n];
    const double dt_avg = n == 0 ? 0.0 : (r.time - records[0].time) / n;
    const double tol_n = c_tol * (dt_avg + proxy) * static_cast<double>(n);
    const double margin = r.entropy_N + r.dissipation_cum - n0;
    if (n > 0) rep.max_margin = std::max(rep.max_margin, margin);
    rep.balance_residual_max = std::max(
        rep.balance_residual_max, std::abs(margin + r.visc_entropy_cum));
    if (margin > tol_n) {
      rep.pass = false;
      if (rep.first_fail < 0) rep.first_fail = static_cast<int>(n);
      rep.max_violation = std::max(rep.max_violation, margin - tol_n);
    }
    if (n > 0) {
      const DiagnosticsRecord& p = records[n - 1];
      const double dstep = r.dissipation_cum - p.dissipation_cum;
      const double slack = c_tol * ((r.time - p.time) + proxy);
      if (r.entropy_N + dstep > p.entropy_N + slack) {
        rep.one_step_pass = false;
        rep.pass = false;
        if (rep.first_fail < 0) rep.first_fail = static_cast<int>(n);
      }
    }
  }
  return rep;
}

EnergyReport verify_energy_inequality(const std::vector<DiagnosticsRecord>& records,
                                      int grid_min_n, const DiagnosticsOptions& opts,
                                      double c_tol_rel) {
  if (records.size() < 2)
    throw InvalidInputError("verify_energy_inequality: need at least 2 records");
  EnergyReport rep;
  rep.c1 = c1_constant(opts.lame);
  const double e0 = records[0].energy_E;
  const double c_tol = c_tol_rel * (std::abs(e0) + 1.0);
  const double proxy = 1.0 / grid_min_n;
  rep.max_margin = -std::numeric_limits<double>::infinity();
  const double el0 = records[0].elastic_E;
  for (std::size_t n = 0; n < records.size(); ++n) {
    const DiagnosticsRecord& r = records[n];
    const double dt_avg = n == 0 ? 0.0 : (r.time - records[0].time) / n;
    const double tol_n = c_tol * (dt_avg + proxy) * static_cast<double>(n);
    const double margin = r.energy_E + r.energy_flux_cum - e0;
    if (n > 0) rep.max_margin = std::max(rep.max_margin, margin);
    rep.balance_residual_max =
        std::max(rep.balance_residual_max, std::abs(margin + r.energy_visc_cum));
    if (margin > tol_n) {
      rep.pass = false;
      if (rep.first_fail < 0) rep.first_fail = static_cast<int>(n);
      rep.max_violation = std::max(rep.max_violation, margin - tol_n);
    }
    if (n > 0) {
      // elastic Lyapunov decay: per-step slack plus the viscous correction,
      // which scales the recorded viscous energy rate by C1
      const DiagnosticsRecord& p = records[n - 1];
      const double dt = r.time - p.time;
      const double visc_corr =
          rep.c1 * 0.5 * (p.energy_visc_rate + r.energy_visc_rate) * dt;
      const double rise = r.elastic_E - p.elastic_E;
      const double slack = 1e-6 * el0 + visc_corr + c_tol * dt;
      rep.elastic_max_rise = std::max(rep.elastic_max_rise, rise);
      if (rise > slack) {
        rep.elastic_monotone = false;
        rep.pass = false;
        if (rep.first_fail < 0) rep.first_fail = static_cast<int>(n);
      }
    }
  }
  return rep;
}

OscillationReport verify_oscillation_bound(const DensityState& state) {
  OscillationReport rep;
  rep.bound = 2.0 * state.slope_L + 1e-8;
  const TorusGrid& g = state.grid();
  for (const RealField* per : {&state.rho_plus_per, &state.rho_minus_per}) {
    const RealField d1 = partial_derivative(*per, 1);
    const std::vector<double> means = row_means(*per);
    for (int j2 = 0; j2 < g.n2(); ++j2) {
      double tv = 0.0, osc = 0.0;
      for (int j1 = 0; j1 < g.n1(); ++j1) {
        tv += std::abs(d1(j1, j2));
        osc = std::max(osc, std::abs((*per)(j1, j2) - means[j2]));
      }
      tv /= g.n1();
      rep.max_row_tv = std::max(rep.max_row_tv, tv);
      rep.max_row_osc = std::max(rep.max_row_osc, osc);
    }
  }
  rep.pass = rep.max_row_tv <= rep.bound && rep.max_row_osc <= rep.bound;
  return rep;
}

MeanEquationReport verify_mean_equation(const std::vector<DiagnosticsRecord>& records,
                                        double epsilon, double threshold) {
  if (records.size() < 2)
    throw InvalidInputError("verify_mean_equation: need at least 2 records");
  if (records[0].mean_plus.empty())
    throw InvalidInputError("verify_mean_equation: records carry no mean profiles");
  MeanEquationReport rep;
  rep.threshold = threshold;
  const int n2 = static_cast<int>(records[0].mean_plus.size());

  // spectral second derivative of a 1D periodic profile
  auto d2_profile = [&](const std::vector<double>& m) {
    std::vector<double> out(n2, 0.0);
    // small n2: direct DFT is fine and keeps this verifier self-contained
    std::vector<std::complex<double>> c(n2, 0.0);
    for (int k = 0; k < n2; ++k) {
      std::complex<double> s = 0.0;
      for (int j = 0; j < n2; ++j)
        s += m[j] * std::exp(std::complex<double>(0.0, -2.0 * M_PI * k * j / n2));
      c[k] = s / static_cast<double>(n2);
    }
    for (int j = 0; j < n2; ++j) {
      std::complex<double> s = 0.0;
      for (int k = 0; k < n2; ++k) {
        const int kk = k <= n2 / 2 ? k : k - n2;
        if (kk == n2 / 2) continue;
        const double mult = -4.0 * M_PI * M_PI * kk * kk;
        s += mult * c[k] * std::exp(std::complex<double>(0.0, 2.0 * M_PI * k * j / n2));
      }
      out[j] = s.real();
    }
    return out;
  };

  for (std::size_t n = 0; n + 1 < records.size(); ++n) {
    const DiagnosticsRecord& a = records[n];
    const DiagnosticsRecord& b = records[n + 1];
    const double dt = b.time - a.time;
    if (dt <= 0.0) continue;
    for (int sp = 0; sp < 2; ++sp) {
      const auto& ma = sp == 0 ? a.mean_plus : a.mean_minus;
      const auto& mb = sp == 0 ? b.mean_plus : b.mean_minus;
      const auto& ia = sp == 0 ? a.i_plus : a.i_minus;
      const auto d2 = d2_profile(ma);
      for (int j = 0; j < n2; ++j) {
        const double resid = (mb[j] - ma[j]) / dt - epsilon * d2[j] - ia[j];
        rep.residual_max = std::max(rep.residual_max, std::abs(resid));
      }
    }
  }
  rep.pass = rep.residual_max <= threshold;
  return rep;
}

DualityReport verify_duality_bound(const std::vector<DensityState>& states,
                                   const std::vector<std::vector<RealField>>& probes) {
  if (states.size() < 3)
    throw InvalidInputError("verify_duality_bound: need at least 3 sampled states");
  DualityReport rep;

  // centred-difference d_t rho at interior samples, then R1^2 R2^2
  std::vector<RealField> w;
  std::vector<double> times;
  for (std::size_t n = 1; n + 1 < states.size(); ++n) {
    const double dt = states[n + 1].time - states[n - 1].time;
    RealField diff = states[n + 1].rho_difference();
    const RealField prev = states[n - 1].rho_difference();
    for (std::size_t i = 0; i < diff.values().size(); ++i)
      diff.values()[i] = (diff.values()[i] - prev.values()[i]) / dt;
    w.push_back(riesz_composite(diff, 2, 2));
    times.push_back(states[n].time);
  }

  for (const auto& probe : probes) {
    if (probe.size() != states.size())
      throw InvalidInputError("verify_duality_bound: probe series length mismatch");
    double pairing = 0.0, norm_sq = 0.0;
    for (std::size_t m = 0; m < w.size(); ++m) {
      const RealField& psi = probe[m + 1];
      double dot = 0.0;
      for (std::size_t i = 0; i < psi.values().size(); ++i)
        dot += psi.values()[i] * w[m].values()[i];
      dot /= static_cast<double>(psi.grid().size());
      // trapezoid over the interior sample times
      double dt = 0.0;
      if (w.size() == 1)
        dt = 1.0;
      else if (m == 0)
        dt = 0.5 * (times[1] - times[0]);
      else if (m + 1 == w.size())
        dt = 0.5 * (times[m] - times[m - 1]);
      else
        dt = 0.5 * (times[m + 1] - times[m - 1]);
      pairing += dot * dt;
      const double wn = w12_norm(psi);
      norm_sq += wn * wn * dt;
    }
    const double ratio = norm_sq > 0.0 ? std::abs(pairing) / std::sqrt(norm_sq) : 0.0;
    rep.ratios.push_back(ratio);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
  }
  return rep;
}

void write_records_csv(const std::vector<DiagnosticsRecord>& records, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("write_records_csv: cannot open " + path);
  std::fprintf(f,
               "time,entropy_N,dissipation_rate,dissipation_cum,visc_entropy_rate,"
               "visc_entropy_cum,energy_E,energy_flux_rate,energy_flux_cum,energy_visc_rate,"
               "energy_visc_cum,elastic_E,l2_plus,l2_minus,llogl_plus,llogl_minus,h3_plus,"
               "h3_minus,velocity_w12,tendency_l1_plus,tendency_l1_minus,clamp_count\n");
  for (const auto& r : records) {
    std::fprintf(f,
                 "%.16e,%.16e,%.16e,%.16e,%.16e,%.16e,%.16e,%.16e,%.16e,%.16e,%.16e,%.16e,"
                 "%.16e,%.16e,%.16e,%.16e,%.16e,%.16e,%.16e,%.16e,%.16e,%ld\n",
                 r.time, r.entropy_N, r.dissipation_rate, r.dissipation_cum,
                 r.visc_entropy_rate, r.visc_entropy_cum, r.energy_E, r.energy_flux_rate,
                 r.energy_flux_cum, r.energy_visc_rate, r.energy_visc_cum, r.elastic_E,
                 r.l2_plus, r.l2_minus, r.llogl_plus, r.llogl_minus, r.h3_plus, r.h3_minus,
                 r.velocity_w12, r.tendency_l1_plus, r.tendency_l1_minus, r.clamp_count);
  }
  std::fclose(f);
}

void write_profiles_csv(const std::vector<DiagnosticsRecord>& records, int n2,
                        const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("write_profiles_csv: cannot open " + path);
  std::fprintf(f, "time,row,x2,mean_plus,mean_minus,i_plus,i_minus\n");
  for (const auto& r : records) {
    if (r.mean_plus.empty()) continue;
    for (int j = 0; j < n2; ++j)
      std::fprintf(f, "%.16e,%d,%.16e,%.16e,%.16e,%.16e,%.16e\n", r.time, j,
                   static_cast<double>(j) / n2, r.mean_plus[j], r.mean_minus[j], r.i_plus[j],
                   r.i_minus[j]);
  }
  std::fclose(f);
}

}  // namespace gb2d
