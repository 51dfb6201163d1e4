#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "gb2d/grid.hpp"

namespace gb2d {

// Real scalar samples on the grid nodes (a periodic function on T^2).
class RealField {
public:
  explicit RealField(const TorusGrid& grid) : grid_(grid), values_(grid.size(), 0.0) {}
  RealField(const TorusGrid& grid, std::vector<double> values)
      : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size())
      throw InvalidInputError("RealField: values length must equal n1*n2");
  }

  const TorusGrid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  double operator()(int j1, int j2) const { return values_[grid_.index(j1, j2)]; }
  double& operator()(int j1, int j2) { return values_[grid_.index(j1, j2)]; }

  bool all_finite() const {
    for (double v : values_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }

  // Fill from a callable f(x1, x2).
  template <class F>
  static RealField from_function(const TorusGrid& grid, F&& f) {
    RealField out(grid);
    for (int j2 = 0; j2 < grid.n2(); ++j2)
      for (int j1 = 0; j1 < grid.n1(); ++j1)
        out(j1, j2) = f(grid.x1(j1), grid.x2(j2));
    return out;
  }

private:
  TorusGrid grid_;
  std::vector<double> values_;
};

// Complex Fourier coefficients c_k indexed by wavevector, in the same
// row-major layout as the real samples (index j maps to k via the grid).
class SpectralCoeffs {
public:
  explicit SpectralCoeffs(const TorusGrid& grid)
      : grid_(grid), coeffs_(grid.size(), std::complex<double>(0.0, 0.0)) {}

  const TorusGrid& grid() const { return grid_; }
  const std::vector<std::complex<double>>& coeffs() const { return coeffs_; }
  std::vector<std::complex<double>>& coeffs() { return coeffs_; }

  std::complex<double> operator()(int j1, int j2) const {
    return coeffs_[grid_.index(j1, j2)];
  }
  std::complex<double>& operator()(int j1, int j2) {
    return coeffs_[grid_.index(j1, j2)];
  }

  // Coefficient at a signed wavevector (k1, k2), |k_i| <= n_i/2.
  std::complex<double> at_wavevector(int k1, int k2) const {
    const int j1 = k1 >= 0 ? k1 : k1 + grid_.n1();
    const int j2 = k2 >= 0 ? k2 : k2 + grid_.n2();
    return coeffs_[grid_.index(j1, j2)];
  }

  // Max |c_{-k} - conj(c_k)| over all modes; 0 for coefficients of a real field.
  double hermitian_defect() const {
    const int n1 = grid_.n1(), n2 = grid_.n2();
    double defect = 0.0;
    for (int j2 = 0; j2 < n2; ++j2) {
      const int j2m = (n2 - j2) % n2;
      for (int j1 = 0; j1 < n1; ++j1) {
        const int j1m = (n1 - j1) % n1;
        const std::complex<double> a = coeffs_[grid_.index(j1m, j2m)];
        const std::complex<double> b = std::conj(coeffs_[grid_.index(j1, j2)]);
        defect = std::max(defect, std::abs(a - b));
      }
    }
    return defect;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
    return m;
  }

private:
  TorusGrid grid_;
  std::vector<std::complex<double>> coeffs_;
};

}  // namespace gb2d
