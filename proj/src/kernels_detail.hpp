#pragma once

#include <algorithm>
#include <cstddef>

#include "nfsar/geometry.hpp"

namespace nfsar::kernels::detail {

/// In-grid window of a patch centered at (ia, ir): patch rows [row_lo, row_hi)
/// and columns [col_lo, col_hi). Image row = ia + row - half_azimuth.
struct Window {
  std::size_t row_lo, row_hi, col_lo, col_hi;
};

inline Window clip(const PsfPatch& p, std::size_t ia, std::size_t ir, const GridSpec& g) {
  const std::size_t ha = p.half_azimuth;
  const std::size_t hr = p.half_range;
  return {ha > ia ? ha - ia : 0, std::min(p.rows(), g.n_azimuth + ha - ia),
          hr > ir ? hr - ir : 0, std::min(p.cols(), g.n_range + hr - ir)};
}

/// out_row[k] += coeff * patch_row[k] for k in [0, n).
inline void axpy_row(const double* patch_row, std::size_t n, cplx coeff, cplx* out_row) {
  double* o = reinterpret_cast<double*>(out_row);
  const double cr = coeff.real();
  const double ci = coeff.imag();
  for (std::size_t k = 0; k < n; ++k) {
    o[2 * k] += cr * patch_row[k];
    o[2 * k + 1] += ci * patch_row[k];
  }
}

}  // namespace nfsar::kernels::detail
