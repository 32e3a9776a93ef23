#include "kernels_detail.hpp"
#include "nfsar/kernels.hpp"

namespace nfsar::kernels {

cplx correlate_at(const PsfPatch& patch, std::size_t ia, std::size_t ir, const ComplexImage& image) {
  const GridSpec& g = image.grid();
  const auto w = detail::clip(patch, ia, ir, g);
  double re = 0.0;
  double im = 0.0;
  const std::size_t n = w.col_hi - w.col_lo;
  for (std::size_t row = w.row_lo; row < w.row_hi; ++row) {
    const double* p = patch.samples.data() + row * patch.cols() + w.col_lo;
    const std::size_t img_row = ia + row - patch.half_azimuth;
    const double* x = reinterpret_cast<const double*>(
        image.data().data() + g.index(img_row, ir + w.col_lo - patch.half_range));
    double row_re = 0.0;
    double row_im = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      row_re += p[k] * x[2 * k];
      row_im += p[k] * x[2 * k + 1];
    }
    re += row_re;
    im += row_im;
  }
  return {re, im};
}

void deposit(const PsfPatch& patch, std::size_t ia, std::size_t ir, cplx coeff, ComplexImage& image) {
  const GridSpec& g = image.grid();
  const auto w = detail::clip(patch, ia, ir, g);
  for (std::size_t row = w.row_lo; row < w.row_hi; ++row) {
    const std::size_t img_row = ia + row - patch.half_azimuth;
    detail::axpy_row(patch.samples.data() + row * patch.cols() + w.col_lo, w.col_hi - w.col_lo, coeff,
                     &image(img_row, ir + w.col_lo - patch.half_range));
  }
}

double clipped_norm2(const PsfPatch& patch, std::size_t ia, std::size_t ir, const GridSpec& grid) {
  const auto w = detail::clip(patch, ia, ir, grid);
  double s = 0.0;
  for (std::size_t row = w.row_lo; row < w.row_hi; ++row) {
    for (std::size_t col = w.col_lo; col < w.col_hi; ++col) {
      const double v = patch.at(row, col);
      s += v * v;
    }
  }
  return s;
}

namespace serial {

void adjoint(const PsfBank& bank, const ComplexImage& image, ComplexImage& out) {
  const GridSpec& g = bank.geometry().grid;
  require_same_grid(g, image.grid(), "adjoint");
  if (!(out.grid() == g)) out = ComplexImage(g);
  for (std::size_t ia = 0; ia < g.n_azimuth; ++ia) {
    for (std::size_t ir = 0; ir < g.n_range; ++ir) {
      out(ia, ir) = correlate_at(bank.lookup(ia, ir), ia, ir, image);
    }
  }
}

void apply(const PsfBank& bank, const ComplexImage& coeffs, ComplexImage& out) {
  const GridSpec& g = bank.geometry().grid;
  require_same_grid(g, coeffs.grid(), "apply");
  out = ComplexImage(g);
  for (std::size_t ia = 0; ia < g.n_azimuth; ++ia) {
    for (std::size_t ir = 0; ir < g.n_range; ++ir) {
      const cplx c = coeffs(ia, ir);
      if (c != cplx{}) deposit(bank.lookup(ia, ir), ia, ir, c, out);
    }
  }
}

}  // namespace serial
}  // namespace nfsar::kernels
