#pragma once

#include <string>

#include "gb2d/state.hpp"

namespace gb2d {

// Binary container for a DensityState:
//   bytes  0..7   magic "GB2DSTAT"
//   bytes  8..11  format version (uint32, little-endian), currently 1
//   bytes 12..15  reserved (zero)
//   uint64 n1, uint64 n2
//   double slope_L, double epsilon, double time
//   n1*n2 doubles rho^{+,per} (row-major, x2 slow), then n1*n2 doubles rho^{-,per}
// All scalars little-endian IEEE-754.  A JSON sidecar <path>.json carries the
// same metadata for human inspection.
void save_state(const DensityState& state, const std::string& path);

DensityState load_state(const std::string& path);

}  // namespace gb2d
