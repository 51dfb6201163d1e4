#include "gb2d/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace gb2d {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// Cached size-specific FFTW plans with owned buffers.  Planning is not
// thread-safe and FFTW_ESTIMATE keeps plans deterministic, so everything is
// funneled through one mutex; transforms copy in and out of the owned buffers.
struct PlanEntry {
  fftw_complex* in = nullptr;
  fftw_complex* out = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  std::size_t n = 0;

  PlanEntry(int n1, int n2) {
    n = static_cast<std::size_t>(n1) * n2;
    in = fftw_alloc_complex(n);
    out = fftw_alloc_complex(n);
    // row-major (n2, n1): x2 is the slow index
    fwd = fftw_plan_dft_2d(n2, n1, in, out, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_2d(n2, n1, in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~PlanEntry() {
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    fftw_free(in);
    fftw_free(out);
  }
  PlanEntry(const PlanEntry&) = delete;
  PlanEntry& operator=(const PlanEntry&) = delete;
};

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

PlanEntry& plan_for(const TorusGrid& g) {
  static std::map<std::pair<int, int>, std::unique_ptr<PlanEntry>> cache;
  auto key = std::make_pair(g.n1(), g.n2());
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, std::make_unique<PlanEntry>(g.n1(), g.n2())).first;
  return *it->second;
}

// Apply a scalar multiplier m(j1, j2) to every coefficient.
template <class M>
SpectralCoeffs apply_multiplier(const SpectralCoeffs& c, M&& m) {
  SpectralCoeffs out(c.grid());
  const TorusGrid& g = c.grid();
  for (int j2 = 0; j2 < g.n2(); ++j2)
    for (int j1 = 0; j1 < g.n1(); ++j1)
      out(j1, j2) = m(j1, j2) * c(j1, j2);
  return out;
}

double riesz_multiplier(const TorusGrid& g, int j1, int j2, int axis) {
  const int k1 = g.k1(j1), k2 = g.k2(j2);
  if (k1 == 0 && k2 == 0) return 0.0;
  // symmetric convention: odd in its own component, so zero on that Nyquist column
  if (axis == 1 && g.nyquist1(j1)) return 0.0;
  if (axis == 2 && g.nyquist2(j2)) return 0.0;
  const double norm = std::sqrt(static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2);
  return (axis == 1 ? k1 : k2) / norm;
}

std::complex<double> derivative_multiplier(const TorusGrid& g, int j1, int j2, int axis) {
  if (axis == 1 && g.nyquist1(j1)) return {0.0, 0.0};
  if (axis == 2 && g.nyquist2(j2)) return {0.0, 0.0};
  const int k = axis == 1 ? g.k1(j1) : g.k2(j2);
  return {0.0, kTwoPi * k};
}

}  // namespace

SpectralCoeffs forward_transform(const RealField& f) {
  if (!f.all_finite())
    throw InvalidInputError("forward_transform: input has non-finite values");
  const TorusGrid& g = f.grid();
  SpectralCoeffs out(g);
  std::lock_guard<std::mutex> lock(plan_mutex());
  PlanEntry& p = plan_for(g);
  for (std::size_t i = 0; i < p.n; ++i) {
    p.in[i][0] = f.values()[i];
    p.in[i][1] = 0.0;
  }
  fftw_execute(p.fwd);
  const double scale = 1.0 / static_cast<double>(p.n);
  for (std::size_t i = 0; i < p.n; ++i)
    out.coeffs()[i] = std::complex<double>(p.out[i][0] * scale, p.out[i][1] * scale);
  return out;
}

std::pair<RealField, RealField> inverse_transform_complex(const SpectralCoeffs& c) {
  const TorusGrid& g = c.grid();
  RealField re(g), im(g);
  std::lock_guard<std::mutex> lock(plan_mutex());
  PlanEntry& p = plan_for(g);
  for (std::size_t i = 0; i < p.n; ++i) {
    p.in[i][0] = c.coeffs()[i].real();
    p.in[i][1] = c.coeffs()[i].imag();
  }
  fftw_execute(p.bwd);
  for (std::size_t i = 0; i < p.n; ++i) {
    re.values()[i] = p.out[i][0];
    im.values()[i] = p.out[i][1];
  }
  return {std::move(re), std::move(im)};
}

RealField inverse_transform(const SpectralCoeffs& c) {
  auto [re, im] = inverse_transform_complex(c);
  const double mag = re.max_abs();
  const double residue = im.max_abs();
  if (residue > 1e-10 * std::max(mag, 1e-300) && residue > 1e-14)
    throw SpectralError("inverse_transform: imaginary residue " + std::to_string(residue) +
                        " exceeds 1e-10 of field magnitude (Hermitian symmetry violated)");
  return std::move(re);
}

SpectralCoeffs riesz(const SpectralCoeffs& c, int axis) {
  if (axis != 1 && axis != 2) throw InvalidInputError("riesz: axis must be 1 or 2");
  const TorusGrid& g = c.grid();
  return apply_multiplier(c, [&](int j1, int j2) { return riesz_multiplier(g, j1, j2, axis); });
}

SpectralCoeffs riesz_composite(const SpectralCoeffs& c, int p1, int p2) {
  if (p1 < 0 || p2 < 0 || p1 + p2 < 1)
    throw InvalidInputError("riesz_composite: requires p1, p2 >= 0 and p1 + p2 >= 1");
  const TorusGrid& g = c.grid();
  return apply_multiplier(c, [&](int j1, int j2) {
    const double m1 = riesz_multiplier(g, j1, j2, 1);
    const double m2 = riesz_multiplier(g, j1, j2, 2);
    double m = 1.0;
    for (int i = 0; i < p1; ++i) m *= m1;
    for (int i = 0; i < p2; ++i) m *= m2;
    return m;
  });
}

RealField riesz_composite(const RealField& f, int p1, int p2) {
  if ((p1 + p2) % 2 != 0)
    throw InvalidInputError(
        "riesz_composite(RealField): odd-order compositions are not real-valued; "
        "use the SpectralCoeffs overload");
  return inverse_transform(riesz_composite(forward_transform(f), p1, p2));
}

SpectralCoeffs partial_derivative(const SpectralCoeffs& c, int axis) {
  if (axis != 1 && axis != 2) throw InvalidInputError("partial_derivative: axis must be 1 or 2");
  const TorusGrid& g = c.grid();
  return apply_multiplier(c,
                          [&](int j1, int j2) { return derivative_multiplier(g, j1, j2, axis); });
}

RealField partial_derivative(const RealField& f, int axis) {
  return inverse_transform(partial_derivative(forward_transform(f), axis));
}

SpectralCoeffs heat_semigroup(const SpectralCoeffs& c, double tau) {
  SpectralCoeffs out = c;
  heat_semigroup_inplace(out, tau);
  return out;
}

void heat_semigroup_inplace(SpectralCoeffs& c, double tau) {
  if (!(tau >= 0.0))
    throw InvalidInputError("heat_semigroup: tau must be >= 0 (backward heat is ill-posed)");
  if (tau == 0.0) return;
  const TorusGrid& g = c.grid();
  const double a = 4.0 * M_PI * M_PI * tau;
  for (int j2 = 0; j2 < g.n2(); ++j2) {
    const double k2 = g.k2(j2);
    for (int j1 = 0; j1 < g.n1(); ++j1) {
      const double k1 = g.k1(j1);
      c(j1, j2) *= std::exp(-a * (k1 * k1 + k2 * k2));
    }
  }
}

SpectralCoeffs inverse_laplacian(const SpectralCoeffs& c) {
  const TorusGrid& g = c.grid();
  return apply_multiplier(c, [&](int j1, int j2) {
    const double k1 = g.k1(j1), k2 = g.k2(j2);
    const double ksq = k1 * k1 + k2 * k2;
    return ksq == 0.0 ? 0.0 : -1.0 / (4.0 * M_PI * M_PI * ksq);
  });
}

void dealias_inplace(SpectralCoeffs& c) {
  const TorusGrid& g = c.grid();
  const double lim1 = g.n1() / 3.0, lim2 = g.n2() / 3.0;
  for (int j2 = 0; j2 < g.n2(); ++j2)
    for (int j1 = 0; j1 < g.n1(); ++j1)
      if (std::abs(g.k1(j1)) > lim1 || std::abs(g.k2(j2)) > lim2) c(j1, j2) = 0.0;
}

SpectralCoeffs dealias(const SpectralCoeffs& c) {
  SpectralCoeffs out = c;
  dealias_inplace(out);
  return out;
}

RealField dealias(const RealField& f) {
  return inverse_transform(dealias(forward_transform(f)));
}

double quadrature(const RealField& f) {
  long double s = 0.0L;
  for (double v : f.values()) s += v;
  return static_cast<double>(s / static_cast<long double>(f.grid().size()));
}

double l2_norm(const RealField& f) {
  long double s = 0.0L;
  for (double v : f.values()) s += static_cast<long double>(v) * v;
  return std::sqrt(static_cast<double>(s / static_cast<long double>(f.grid().size())));
}

double l2_norm(const SpectralCoeffs& c) {
  long double s = 0.0L;
  for (const auto& z : c.coeffs()) s += static_cast<long double>(std::norm(z));
  return std::sqrt(static_cast<double>(s));
}

std::complex<double> inner_product(const SpectralCoeffs& u, const SpectralCoeffs& v) {
  if (!(u.grid() == v.grid())) throw InvalidInputError("inner_product: grid mismatch");
  long double re = 0.0L, im = 0.0L;
  for (std::size_t i = 0; i < u.coeffs().size(); ++i) {
    const std::complex<double> t = u.coeffs()[i] * std::conj(v.coeffs()[i]);
    re += t.real();
    im += t.imag();
  }
  return {static_cast<double>(re), static_cast<double>(im)};
}

RealField gradient_magnitude(const RealField& f) {
  const SpectralCoeffs c = forward_transform(f);
  const RealField d1 = inverse_transform(partial_derivative(c, 1));
  const RealField d2 = inverse_transform(partial_derivative(c, 2));
  RealField out(f.grid());
  for (std::size_t i = 0; i < out.values().size(); ++i)
    out.values()[i] = std::hypot(d1.values()[i], d2.values()[i]);
  return out;
}

double w12_norm(const RealField& f) {
  const RealField gm = gradient_magnitude(f);
  long double s = 0.0L;
  for (std::size_t i = 0; i < f.values().size(); ++i)
    s += static_cast<long double>(f.values()[i]) * f.values()[i] +
         static_cast<long double>(gm.values()[i]) * gm.values()[i];
  return std::sqrt(static_cast<double>(s / static_cast<long double>(f.grid().size())));
}

namespace {
double w132_integral(const RealField& f) {
  const RealField gm = gradient_magnitude(f);
  long double s = 0.0L;
  for (std::size_t i = 0; i < f.values().size(); ++i)
    s += std::pow(std::abs(static_cast<long double>(f.values()[i])), 1.5L) +
         std::pow(static_cast<long double>(gm.values()[i]), 1.5L);
  return static_cast<double>(s / static_cast<long double>(f.grid().size()));
}
}  // namespace

double w132_norm(const RealField& f) { return std::pow(w132_integral(f), 2.0 / 3.0); }

double w132_norm_pair(const RealField& fp, const RealField& fm) {
  return std::pow(w132_integral(fp) + w132_integral(fm), 2.0 / 3.0);
}

std::vector<double> row_means(const RealField& f) {
  const TorusGrid& g = f.grid();
  std::vector<double> m(g.n2(), 0.0);
  for (int j2 = 0; j2 < g.n2(); ++j2) {
    double s = 0.0;
    for (int j1 = 0; j1 < g.n1(); ++j1) s += f(j1, j2);
    m[j2] = s / g.n1();
  }
  return m;
}

}  // namespace gb2d
