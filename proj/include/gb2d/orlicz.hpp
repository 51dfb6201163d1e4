#pragma once

#include "gb2d/spectral.hpp"

namespace gb2d {

// Young function families generating the Orlicz spaces used here:
// LLogBeta:  A(t) = t (log(e + t))^beta,  beta >= 0  (Zygmund L log^beta L)
// ExpAlpha:  A(t) = e^{t^alpha} - 1,      alpha >= 1 (EXP_alpha)
class YoungFunction {
public:
  enum class Kind { LLogBeta, ExpAlpha };

  static YoungFunction l_log_beta(double beta);
  static YoungFunction exp_alpha(double alpha);

  Kind kind() const { return kind_; }
  double parameter() const { return param_; }

  double operator()(double t) const;

  // Samples A on a log-spaced grid and checks A(0)=0, monotonicity, and
  // midpoint convexity.  Guards parameter mistakes; throws on failure.
  void validate() const;

private:
  YoungFunction(Kind kind, double param) : kind_(kind), param_(param) {}
  Kind kind_;
  double param_;
};

// Luxemburg gauge norm: inf{ lambda > 0 : quadrature(A(|f|/lambda)) <= 1 },
// computed by bisection on the monotone map lambda -> quadrature(A(|f|/lambda)).
// Returns 0 for f == 0 and +inf only if no finite bracket exists in floating
// range (unreachable for finite grid data).  Relative tolerance 1e-10.
double luxemburg_norm(const RealField& f, const YoungFunction& A);

// Convenience: the L log L norm (beta = 1) of Definition-level use.
double llogl_norm(const RealField& f);

// Grid quadrature of theta*ln(theta) with theta clamped below at `floor`.
// Throws MonotonicityLostError if any node is negative before clamping.
// clamp_count (optional) receives the number of clamped nodes; it must be 0
// in healthy runs.
double entropy_density_integral(const RealField& theta, double floor,
                                long* clamp_count = nullptr);

}  // namespace gb2d
