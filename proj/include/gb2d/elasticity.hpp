#pragma once

#include "gb2d/spectral.hpp"

namespace gb2d {

// Lame coefficients, stress units normalized to 1.  Requires mu > 0 and
// 3*lambda + 2*mu > 0; for lambda < 0 the energy quadratic form is also
// checked positive semidefinite numerically.
struct LameParams {
  double lambda;
  double mu;

  LameParams(double lambda, double mu);
};

// Periodic displacement components; both mean-zero (translation gauge).
struct DisplacementField {
  RealField u1;
  RealField u2;
};

// C1 = 4 (lambda + mu) mu / (lambda + 2 mu).
double c1_constant(const LameParams& p);

// Closed-form shear stress sigma_12 = -C1 R1^2 R2^2 rho (rho = rho^+ - rho^-,
// periodic); mean-zero by construction.
RealField sigma12_spectral(const RealField& rho, const LameParams& p);

// Per-wavevector solve of the planar Lame system
//   mu Lap u1 + (lambda+mu) d1(div u) = mu d2 rho
//   mu Lap u2 + (lambda+mu) d2(div u) = mu d1 rho
// with the discrete derivative symbols.  The k = 0 mode and the pure-Nyquist
// modes (where both discrete derivatives vanish) are gauge modes set to zero;
// a singular block anywhere else is a hard error.
DisplacementField solve_displacement(const RealField& rho, const LameParams& p);

// sigma_12 = mu (d2 u1 + d1 u2 - rho) evaluated from a displacement field.
RealField sigma12_direct(const DisplacementField& u, const RealField& rho, const LameParams& p);

// E = quadrature( mu sum_ij (eps^e_ij)^2 + (lambda/2) (sum_k eps^e_kk)^2 )
// with eps^e_ij = (d_j u_i + d_i u_j)/2 - rho * eps0_ij, eps0_ij = (1-delta_ij)/2.
double elastic_energy(const DisplacementField& u, const RealField& rho, const LameParams& p);

}  // namespace gb2d
