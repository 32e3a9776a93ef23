#include <cstdint>
#include <vector>

#include "kernels_detail.hpp"
#include "nfsar/kernels.hpp"

namespace nfsar::kernels::parallel {

void adjoint(const PsfBank& bank, const ComplexImage& image, ComplexImage& out) {
  const GridSpec& g = bank.geometry().grid;
  require_same_grid(g, image.grid(), "adjoint");
  if (!(out.grid() == g)) out = ComplexImage(g);
  const auto n = static_cast<std::int64_t>(g.cells());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t j = 0; j < n; ++j) {
    const std::size_t ia = static_cast<std::size_t>(j) / g.n_range;
    const std::size_t ir = static_cast<std::size_t>(j) % g.n_range;
    out[j] = correlate_at(bank.lookup(j), ia, ir, image);
  }
}

void apply(const PsfBank& bank, const ComplexImage& coeffs, ComplexImage& out) {
  const GridSpec& g = bank.geometry().grid;
  require_same_grid(g, coeffs.grid(), "apply");
  out = ComplexImage(g);

  std::vector<std::size_t> support;
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    if (coeffs[j] != cplx{}) support.push_back(j);
  }

  // Each thread owns whole output rows and visits the support in row-major
  // order, so every sample accumulates in the same order as the serial path.
  const auto rows = static_cast<std::int64_t>(g.n_azimuth);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t out_row = 0; out_row < rows; ++out_row) {
    for (const std::size_t j : support) {
      const std::size_t ia = j / g.n_range;
      const std::size_t ir = j % g.n_range;
      const PsfPatch& p = bank.lookup(j);
      const auto w = detail::clip(p, ia, ir, g);
      const auto row = static_cast<std::int64_t>(p.half_azimuth) + out_row - static_cast<std::int64_t>(ia);
      if (row < static_cast<std::int64_t>(w.row_lo) || row >= static_cast<std::int64_t>(w.row_hi)) continue;
      detail::axpy_row(p.samples.data() + static_cast<std::size_t>(row) * p.cols() + w.col_lo,
                       w.col_hi - w.col_lo, coeffs[j],
                       &out(static_cast<std::size_t>(out_row), ir + w.col_lo - p.half_range));
    }
  }
}

}  // namespace nfsar::kernels::parallel
