#pragma once

#include <random>

#include "gb2d/spectral.hpp"

namespace gb2d {

// Seeded random-field generators shared by the verification battery and the
// test suites.  Both return unit-sup-norm fields; fixtures recorded by the
// suites are tied to these exact recipes.

// Band-limited spectrum with |k|^{-decay} damping, Hermitian-symmetrized;
// Nyquist columns stay empty unless requested.
inline RealField random_field(const TorusGrid& g, std::mt19937_64& rng, double decay = 1.0,
                              bool include_nyquist = false) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  SpectralCoeffs c(g);
  for (int j2 = 0; j2 < g.n2(); ++j2) {
    for (int j1 = 0; j1 < g.n1(); ++j1) {
      const int k1 = g.k1(j1), k2 = g.k2(j2);
      if (k1 == 0 && k2 == 0) continue;
      if (!include_nyquist && (g.nyquist1(j1) || g.nyquist2(j2))) continue;
      const double amp = std::pow(std::max(1.0, std::sqrt(double(k1 * k1 + k2 * k2))), -decay);
      c(j1, j2) = std::complex<double>(gauss(rng), gauss(rng)) * amp;
    }
  }
  SpectralCoeffs h(g);
  for (int j2 = 0; j2 < g.n2(); ++j2) {
    const int j2m = (g.n2() - j2) % g.n2();
    for (int j1 = 0; j1 < g.n1(); ++j1) {
      const int j1m = (g.n1() - j1) % g.n1();
      h(j1, j2) = 0.5 * (c(j1, j2) + std::conj(c.coeffs()[g.index(j1m, j2m)]));
    }
  }
  RealField f = inverse_transform(h);
  const double m = f.max_abs();
  if (m > 0.0)
    for (double& v : f.values()) v /= m;
  return f;
}

// Full-spectrum white noise at the nodes (every mode populated).
inline RealField random_nodal_field(const TorusGrid& g, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  RealField f(g);
  for (double& v : f.values()) v = gauss(rng);
  const double m = f.max_abs();
  for (double& v : f.values()) v /= m;
  return f;
}

}  // namespace gb2d
