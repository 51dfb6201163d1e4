#include "gb2d/state.hpp"

#include <cmath>
#include <random>

#include "gb2d/orlicz.hpp"

namespace gb2d {

DensityState::DensityState(RealField plus, RealField minus, double L, double eps, double t)
    : rho_plus_per(std::move(plus)),
      rho_minus_per(std::move(minus)),
      slope_L(L),
      epsilon(eps),
      time(t) {
  if (!(rho_plus_per.grid() == rho_minus_per.grid()))
    throw InvalidInputError("DensityState: species live on different grids");
  if (!(slope_L > 0.0)) throw InvalidInputError("DensityState: slope_L must be > 0");
  if (!(epsilon >= 0.0)) throw InvalidInputError("DensityState: epsilon must be >= 0");
  if (!(time >= 0.0)) throw InvalidInputError("DensityState: time must be >= 0");
}

RealField DensityState::rho_difference() const {
  RealField out(grid());
  for (std::size_t i = 0; i < out.values().size(); ++i)
    out.values()[i] = rho_plus_per.values()[i] - rho_minus_per.values()[i];
  return out;
}

namespace {

void add_mode(RealField& f, const PerturbationMode& m) {
  const TorusGrid& g = f.grid();
  for (int j2 = 0; j2 < g.n2(); ++j2)
    for (int j1 = 0; j1 < g.n1(); ++j1)
      f(j1, j2) += m.amplitude *
                   std::sin(2.0 * M_PI * (m.k1 * g.x1(j1) + m.k2 * g.x2(j2)) + m.phase);
}

// |d1 sum| <= 2 pi sum |k1 A|: the a priori monotonicity budget of a mode list.
double derivative_bound(const std::vector<PerturbationMode>& modes) {
  double b = 0.0;
  for (const auto& m : modes) b += 2.0 * M_PI * std::abs(m.k1) * std::abs(m.amplitude);
  return b;
}

std::vector<PerturbationMode> draw_random_modes(const PerturbationSpec& spec, double slope_L,
                                                std::mt19937_64& rng) {
  std::uniform_int_distribution<int> kdist(-spec.random_max_k, spec.random_max_k);
  std::uniform_real_distribution<double> adist(-1.0, 1.0);
  std::uniform_real_distribution<double> pdist(0.0, 2.0 * M_PI);
  std::vector<PerturbationMode> modes;
  for (int i = 0; i < spec.random_modes; ++i) {
    PerturbationMode m;
    do {
      m.k1 = kdist(rng);
      m.k2 = kdist(rng);
    } while (m.k1 == 0 && m.k2 == 0);
    m.amplitude = spec.random_amplitude * adist(rng);
    m.phase = pdist(rng);
    modes.push_back(m);
  }
  // rescale so the random part consumes at most margin_budget * L of the margin
  const double bound = derivative_bound(modes);
  const double budget = spec.margin_budget * slope_L;
  if (bound > budget && bound > 0.0) {
    const double s = budget / bound;
    for (auto& m : modes) m.amplitude *= s;
  }
  return modes;
}

}  // namespace

DensityState build_initial(const TorusGrid& grid, double slope_L, const PerturbationSpec& spec,
                           std::uint64_t seed) {
  if (!(slope_L > 0.0)) throw InvalidInputError("build_initial: slope_L must be > 0");
  RealField plus(grid), minus(grid);
  for (const auto& m : spec.plus) add_mode(plus, m);
  for (const auto& m : spec.minus) add_mode(minus, m);
  if (spec.random_modes > 0) {
    std::mt19937_64 rng(seed);
    for (const auto& m : draw_random_modes(spec, slope_L, rng)) add_mode(plus, m);
    for (const auto& m : draw_random_modes(spec, slope_L, rng)) add_mode(minus, m);
  }
  DensityState state(std::move(plus), std::move(minus), slope_L, 0.0, 0.0);
  const HypothesisReport rep = check_hypotheses(state);
  if (rep.h3_margin() < 0.0)
    throw InvalidInputError("build_initial: perturbation violates the monotonicity hypothesis "
                            "(margin " + std::to_string(rep.h3_margin()) + " < 0)");
  return state;
}

RealField mollify_field(const RealField& f, double eps) {
  SpectralCoeffs c = forward_transform(f);
  const TorusGrid& g = f.grid();
  const double a = 2.0 * M_PI * M_PI * eps * eps;
  for (int j2 = 0; j2 < g.n2(); ++j2) {
    const double k2 = g.k2(j2);
    for (int j1 = 0; j1 < g.n1(); ++j1) {
      const double k1 = g.k1(j1);
      c(j1, j2) *= std::exp(-a * (k1 * k1 + k2 * k2));
    }
  }
  return inverse_transform(c);
}

DensityState mollify(const DensityState& state, double eps) {
  if (!(eps > 0.0 && eps <= 1.0))
    throw InvalidInputError("mollify: eps must lie in (0, 1]");
  return DensityState(mollify_field(state.rho_plus_per, eps),
                      mollify_field(state.rho_minus_per, eps), state.slope_L + eps, eps,
                      state.time);
}

RealField species_density(const DensityState& state, int species) {
  const RealField& per = species > 0 ? state.rho_plus_per : state.rho_minus_per;
  RealField theta = partial_derivative(per, 1);
  for (double& v : theta.values()) v += state.slope_L;
  return theta;
}

HypothesisReport check_hypotheses(const DensityState& state) {
  HypothesisReport rep;
  rep.h1_residual = 0.0;  // periodic representation: defects vanish by construction
  rep.h2_residual = 0.0;
  const RealField theta_p = species_density(state, +1);
  const RealField theta_m = species_density(state, -1);
  auto nodal_min = [](const RealField& f) {
    double m = f.values()[0];
    for (double v : f.values()) m = std::min(m, v);
    return m;
  };
  rep.h3_margin_plus = nodal_min(theta_p);
  rep.h3_margin_minus = nodal_min(theta_m);
  rep.h4_norm_plus = llogl_norm(theta_p);
  rep.h4_norm_minus = llogl_norm(theta_m);
  return rep;
}

double trudinger_gamma_probe(const RealField& f) {
  const double nrm = w12_norm(f);
  if (nrm == 0.0) return std::numeric_limits<double>::infinity();
  auto gauge = [&](double gamma) {
    double s = 0.0;
    for (double v : f.values()) {
      const double u = v / nrm;
      s += std::expm1(gamma * u * u);
    }
    return s / static_cast<double>(f.grid().size());
  };
  double lo = 0.0, hi = 1.0;
  while (gauge(hi) <= 1.0 && hi < 1e12) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-10 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (gauge(mid) <= 1.0 ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace gb2d
