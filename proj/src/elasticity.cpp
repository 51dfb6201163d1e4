#include "gb2d/elasticity.hpp"

#include <cmath>
#include <complex>

namespace gb2d {

LameParams::LameParams(double lambda, double mu) : lambda(lambda), mu(mu) {
  if (!(mu > 0.0)) throw InvalidInputError("LameParams: mu must be > 0");
  if (!(3.0 * lambda + 2.0 * mu > 0.0))
    throw InvalidInputError("LameParams: 3*lambda + 2*mu must be > 0");
  if (lambda < 0.0) {
    // eigenvalues of the energy quadratic form on (eps11, eps22, eps12)
    const double eigs[3] = {mu, mu + lambda, 2.0 * mu};
    for (double e : eigs)
      if (e < -1e-15)
        throw InvalidInputError("LameParams: energy quadratic form not positive semidefinite");
  }
}

double c1_constant(const LameParams& p) {
  const double denom = p.lambda + 2.0 * p.mu;
  if (!(denom > 0.0)) throw InvalidInputError("c1_constant: lambda + 2*mu must be > 0");
  return 4.0 * (p.lambda + p.mu) * p.mu / denom;
}

RealField sigma12_spectral(const RealField& rho, const LameParams& p) {
  const double c1 = c1_constant(p);
  RealField out = riesz_composite(rho, 2, 2);
  for (double& v : out.values()) v *= -c1;
  return out;
}

DisplacementField solve_displacement(const RealField& rho, const LameParams& p) {
  const TorusGrid& g = rho.grid();
  SpectralCoeffs rho_hat = forward_transform(rho);
  rho_hat(0, 0) = 0.0;  // the mean sources no displacement

  SpectralCoeffs u1_hat(g), u2_hat(g);
  const std::complex<double> i2pi(0.0, 2.0 * M_PI);
  for (int j2 = 0; j2 < g.n2(); ++j2) {
    for (int j1 = 0; j1 < g.n1(); ++j1) {
      // discrete derivative symbols (zero on their Nyquist column)
      const std::complex<double> d1 = g.nyquist1(j1) ? 0.0 : i2pi * double(g.k1(j1));
      const std::complex<double> d2 = g.nyquist2(j2) ? 0.0 : i2pi * double(g.k2(j2));
      const std::complex<double> lap = d1 * d1 + d2 * d2;
      if (lap == 0.0) {
        // k = 0 and pure-Nyquist modes: gauge modes of the discrete system
        u1_hat(j1, j2) = 0.0;
        u2_hat(j1, j2) = 0.0;
        continue;
      }
      const double lm = p.lambda + p.mu;
      const std::complex<double> a11 = p.mu * lap + lm * d1 * d1;
      const std::complex<double> a22 = p.mu * lap + lm * d2 * d2;
      const std::complex<double> a12 = lm * d1 * d2;
      const std::complex<double> det = a11 * a22 - a12 * a12;
      const std::complex<double> r = rho_hat(j1, j2);
      const std::complex<double> b1 = p.mu * d2 * r;
      const std::complex<double> b2 = p.mu * d1 * r;
      if (std::abs(det) < 1e-14 * std::norm(lap) * p.mu * p.mu)
        throw std::runtime_error("solve_displacement: singular Lame block at k=(" +
                                 std::to_string(g.k1(j1)) + "," + std::to_string(g.k2(j2)) +
                                 "); LameParams validation should have prevented this");
      u1_hat(j1, j2) = (b1 * a22 - b2 * a12) / det;
      u2_hat(j1, j2) = (a11 * b2 - a12 * b1) / det;
    }
  }
  return DisplacementField{inverse_transform(u1_hat), inverse_transform(u2_hat)};
}

RealField sigma12_direct(const DisplacementField& u, const RealField& rho, const LameParams& p) {
  const RealField d2u1 = partial_derivative(u.u1, 2);
  const RealField d1u2 = partial_derivative(u.u2, 1);
  RealField out(rho.grid());
  for (std::size_t i = 0; i < out.values().size(); ++i)
    out.values()[i] = p.mu * (d2u1.values()[i] + d1u2.values()[i] - rho.values()[i]);
  return out;
}

double elastic_energy(const DisplacementField& u, const RealField& rho, const LameParams& p) {
  const RealField d1u1 = partial_derivative(u.u1, 1);
  const RealField d2u2 = partial_derivative(u.u2, 2);
  const RealField d2u1 = partial_derivative(u.u1, 2);
  const RealField d1u2 = partial_derivative(u.u2, 1);
  long double s = 0.0L;
  for (std::size_t i = 0; i < rho.values().size(); ++i) {
    const double e11 = d1u1.values()[i];
    const double e22 = d2u2.values()[i];
    const double e12 = 0.5 * (d2u1.values()[i] + d1u2.values()[i]) - 0.5 * rho.values()[i];
    const double trace = e11 + e22;  // eps0 is trace-free
    s += p.mu * (e11 * e11 + e22 * e22 + 2.0 * e12 * e12) + 0.5 * p.lambda * trace * trace;
  }
  return static_cast<double>(s / static_cast<long double>(rho.grid().size()));
}

}  // namespace gb2d
