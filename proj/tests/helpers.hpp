#pragma once

#include "gb2d/random_fields.hpp"

namespace gb2d::testing {

using gb2d::random_field;
using gb2d::random_nodal_field;

inline double max_abs_diff(const RealField& a, const RealField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i)
    m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  return m;
}

inline double max_abs_diff(const SpectralCoeffs& a, const SpectralCoeffs& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.coeffs().size(); ++i)
    m = std::max(m, std::abs(a.coeffs()[i] - b.coeffs()[i]));
  return m;
}

}  // namespace gb2d::testing
