#pragma once

#include <cstddef>

#include "nfsar/geometry.hpp"
#include "nfsar/image.hpp"

/// Patch-level primitives and whole-image operators of the spatial-variant
/// dictionary. The serial namespace is the reference implementation; the
/// parallel namespace distributes disjoint output cells over OpenMP threads and
/// reproduces the serial results bit for bit.
namespace nfsar::kernels {

/// sum_k d(k) * image(k) over the part of the patch, centered at (ia, ir),
/// that lies inside the image. The patch is real, so this is <d, image>.
cplx correlate_at(const PsfPatch& patch, std::size_t ia, std::size_t ir, const ComplexImage& image);

/// image += coeff * d over the in-grid part of the patch centered at (ia, ir).
void deposit(const PsfPatch& patch, std::size_t ia, std::size_t ir, cplx coeff, ComplexImage& image);

/// Squared norm of the patch after clipping to the grid.
double clipped_norm2(const PsfPatch& patch, std::size_t ia, std::size_t ir, const GridSpec& grid);

namespace serial {
/// out(j) = <d_j, image> for every cell j.
void adjoint(const PsfBank& bank, const ComplexImage& image, ComplexImage& out);
/// out = sum_j coeffs(j) d_j (out is overwritten).
void apply(const PsfBank& bank, const ComplexImage& coeffs, ComplexImage& out);
}  // namespace serial

namespace parallel {
void adjoint(const PsfBank& bank, const ComplexImage& image, ComplexImage& out);
void apply(const PsfBank& bank, const ComplexImage& coeffs, ComplexImage& out);
}  // namespace parallel

inline void adjoint(const PsfBank& bank, const ComplexImage& image, ComplexImage& out,
                    Execution execution) {
  execution == Execution::parallel ? parallel::adjoint(bank, image, out)
                                   : serial::adjoint(bank, image, out);
}

inline void apply(const PsfBank& bank, const ComplexImage& coeffs, ComplexImage& out,
                  Execution execution) {
  execution == Execution::parallel ? parallel::apply(bank, coeffs, out)
                                   : serial::apply(bank, coeffs, out);
}

}  // namespace nfsar::kernels
