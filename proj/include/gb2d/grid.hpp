#pragma once

#include <cstddef>

#include "gb2d/errors.hpp"

namespace gb2d {

// Uniform discretization of the unit torus T^2 = R^2/Z^2.
//
// Nodes are x = (j1/n1, j2/n2), j_i = 0..n_i-1, stored row-major with x2 as
// the slow index: flat index = j2*n1 + j1.  Wavevectors follow the usual DFT
// convention k = j for j <= n/2 and k = j - n otherwise, so each |k_i| <= n_i/2
// with the Nyquist value +n_i/2 appearing once.
class TorusGrid {
public:
  TorusGrid(int n1, int n2) : n1_(n1), n2_(n2) {
    if (n1 < 8 || n2 < 8 || n1 % 2 != 0 || n2 % 2 != 0)
      throw InvalidInputError("TorusGrid: n1, n2 must be even and >= 8");
  }

  int n1() const { return n1_; }
  int n2() const { return n2_; }
  std::size_t size() const { return static_cast<std::size_t>(n1_) * n2_; }

  std::size_t index(int j1, int j2) const {
    return static_cast<std::size_t>(j2) * n1_ + j1;
  }

  double x1(int j1) const { return static_cast<double>(j1) / n1_; }
  double x2(int j2) const { return static_cast<double>(j2) / n2_; }

  // Signed wavevector component for a storage index along each axis.
  int k1(int j1) const { return j1 <= n1_ / 2 ? j1 : j1 - n1_; }
  int k2(int j2) const { return j2 <= n2_ / 2 ? j2 : j2 - n2_; }

  bool nyquist1(int j1) const { return j1 == n1_ / 2; }
  bool nyquist2(int j2) const { return j2 == n2_ / 2; }

  friend bool operator==(const TorusGrid& a, const TorusGrid& b) {
    return a.n1_ == b.n1_ && a.n2_ == b.n2_;
  }

private:
  int n1_;
  int n2_;
};

}  // namespace gb2d
