#pragma once

#include <utility>

#include "gb2d/field.hpp"

namespace gb2d {

// Forward/inverse Fourier transforms and the Fourier-multiplier operators
// used by the dynamics: Riesz transforms, spectral derivatives, inverse
// Laplacian, heat semigroup, and the 2/3-rule dealiasing mask.
//
// Conventions:
//  * c_{(0,0)} equals the grid mean, i.e. c_k = (1/N) sum_x f(x) e^{-2 pi i k.x}.
//  * The Riesz multiplier is k_i/|k| (no -i factor), zero at k = 0.  A single
//    transform therefore maps a real field to one with an imaginary part in
//    physical space; real-field wrappers are provided only for even-order
//    compositions, whose multipliers are real and even.
//  * Multipliers odd in a component are zeroed on that component's Nyquist
//    column (the symmetric average of the two aliased interpretations +-n/2):
//    derivatives at |k_a| = n_a/2, Riesz R_i at |k_i| = n_i/2.

// -- transforms ---------------------------------------------------------

// Discrete quadrature of c_k(f) = int f e^{-2 pi i k.x}; rejects non-finite input.
SpectralCoeffs forward_transform(const RealField& f);

// Inverse series; checks Hermitian symmetry and that the imaginary residue is
// below 1e-10 of the field magnitude before discarding it.
RealField inverse_transform(const SpectralCoeffs& c);

// Inverse series without the realness requirement: returns (real, imag) parts.
std::pair<RealField, RealField> inverse_transform_complex(const SpectralCoeffs& c);

// -- multiplier operators ------------------------------------------------

SpectralCoeffs riesz(const SpectralCoeffs& c, int axis);

// R_1^{p1} R_2^{p2}; requires p1 + p2 >= 1.
SpectralCoeffs riesz_composite(const SpectralCoeffs& c, int p1, int p2);

// Real-field wrapper, defined only for even p1 + p2 (real multiplier).
RealField riesz_composite(const RealField& f, int p1, int p2);

SpectralCoeffs partial_derivative(const SpectralCoeffs& c, int axis);
RealField partial_derivative(const RealField& f, int axis);

// e^{tau Delta}: coefficient at k scaled by exp(-4 pi^2 |k|^2 tau); tau >= 0.
SpectralCoeffs heat_semigroup(const SpectralCoeffs& c, double tau);
void heat_semigroup_inplace(SpectralCoeffs& c, double tau);

// Multiplier -1/(4 pi^2 |k|^2), zero at k = 0 (mean-free inverse Laplacian).
SpectralCoeffs inverse_laplacian(const SpectralCoeffs& c);

// 2/3-rule mask: zero every coefficient with |k1| > n1/3 or |k2| > n2/3.
SpectralCoeffs dealias(const SpectralCoeffs& c);
void dealias_inplace(SpectralCoeffs& c);
RealField dealias(const RealField& f);

// -- quadrature and norms -------------------------------------------------

// Uniform grid quadrature of int_{T^2} f (= mean on the unit-measure torus).
double quadrature(const RealField& f);

double l2_norm(const RealField& f);
double l2_norm(const SpectralCoeffs& c);

// Hermitian pairing sum_k c_k(u) conj(c_k(v)) = quadrature of u conj(v).
std::complex<double> inner_product(const SpectralCoeffs& u, const SpectralCoeffs& v);

// Gradient magnitude sqrt((d1 f)^2 + (d2 f)^2) at the nodes.
RealField gradient_magnitude(const RealField& f);

// W^{1,2} norm: sqrt(quadrature(f^2 + |grad f|^2)).
double w12_norm(const RealField& f);

// W^{1,3/2} norm: quadrature(|f|^{3/2} + |grad f|^{3/2})^{2/3}.
double w132_norm(const RealField& f);
// Same for a pair (the two species): integrals summed before the 2/3 power.
double w132_norm_pair(const RealField& fp, const RealField& fm);

// Per-row means over x1 (one value per x2 row).
std::vector<double> row_means(const RealField& f);

}  // namespace gb2d
