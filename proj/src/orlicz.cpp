#include "gb2d/orlicz.hpp"

#include <cmath>
#include <limits>

namespace gb2d {

YoungFunction YoungFunction::l_log_beta(double beta) {
  if (!(beta >= 0.0)) throw InvalidInputError("YoungFunction: LLogBeta requires beta >= 0");
  return YoungFunction(Kind::LLogBeta, beta);
}

YoungFunction YoungFunction::exp_alpha(double alpha) {
  if (!(alpha >= 1.0)) throw InvalidInputError("YoungFunction: ExpAlpha requires alpha >= 1");
  return YoungFunction(Kind::ExpAlpha, alpha);
}

double YoungFunction::operator()(double t) const {
  if (t <= 0.0) return 0.0;
  if (kind_ == Kind::LLogBeta) {
    const double lg = std::log(M_E + t);
    if (param_ == 0.0) return t;
    if (param_ == 1.0) return t * lg;
    return t * std::pow(lg, param_);
  }
  // e^{t^alpha} - 1; overflow to +inf is fine, the bisection treats it as > 1
  const double p = param_ == 1.0 ? t : std::pow(t, param_);
  return std::expm1(p);
}

void YoungFunction::validate() const {
  const YoungFunction& A = *this;
  if (A(0.0) != 0.0) throw InvalidInputError("YoungFunction: A(0) must be 0");
  double prev_t = 0.0, prev_v = 0.0;
  for (double t = 1e-6; t < 1e3; t *= 2.0) {
    const double v = A(t);
    if (!(v >= prev_v)) throw InvalidInputError("YoungFunction: not non-decreasing");
    const double mid = A(0.5 * (prev_t + t));
    if (mid > 0.5 * (prev_v + v) + 1e-12 * (1.0 + std::abs(v)))
      throw InvalidInputError("YoungFunction: midpoint convexity failed");
    prev_t = t;
    prev_v = v;
  }
}

namespace {
// quadrature(A(|f|/lambda)); +inf propagates if A overflows.
double gauge_integral(const RealField& f, const YoungFunction& A, double lambda) {
  long double s = 0.0L;
  for (double v : f.values()) s += A(std::abs(v) / lambda);
  return static_cast<double>(s / static_cast<long double>(f.grid().size()));
}
}  // namespace

double luxemburg_norm(const RealField& f, const YoungFunction& A) {
  if (!f.all_finite()) throw InvalidInputError("luxemburg_norm: non-finite input");
  const double fmax = f.max_abs();
  if (fmax == 0.0) return 0.0;

  double lo = 1e-30;
  double hi = std::max(1.0, 10.0 * fmax);
  int widen = 0;
  while (gauge_integral(f, A, hi) > 1.0) {
    hi *= 2.0;
    if (++widen > 1000 || hi > 1e300) return std::numeric_limits<double>::infinity();
  }
  while (hi - lo > 1e-10 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (gauge_integral(f, A, mid) > 1.0)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

double llogl_norm(const RealField& f) {
  return luxemburg_norm(f, YoungFunction::l_log_beta(1.0));
}

double entropy_density_integral(const RealField& theta, double floor, long* clamp_count) {
  long clamped = 0;
  long double s = 0.0L;
  for (double v : theta.values()) {
    if (v < 0.0)
      throw MonotonicityLostError(
          0.0, v, "entropy_density_integral: negative density node (value " +
                      std::to_string(v) + "); the sign condition was lost upstream");
    double t = v;
    if (t < floor) {
      t = floor;
      ++clamped;
    }
    s += t * std::log(t);
  }
  if (clamp_count) *clamp_count = clamped;
  return static_cast<double>(s / static_cast<long double>(theta.grid().size()));
}

}  // namespace gb2d
