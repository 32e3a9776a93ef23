#include "nfsar/dictionary.hpp"

#include <algorithm>

#include "nfsar/kernels.hpp"

namespace nfsar {

VariantDictionary::VariantDictionary(const PsfBank& bank, Execution execution)
    : bank_(&bank), execution_(execution), norm2_(bank.geometry().grid.cells()) {
  const GridSpec& g = grid();
  for (std::size_t ia = 0; ia < g.n_azimuth; ++ia) {
    for (std::size_t ir = 0; ir < g.n_range; ++ir) {
      const std::size_t j = g.index(ia, ir);
      norm2_[j] = kernels::clipped_norm2(bank.lookup(j), ia, ir, g);
    }
  }
  max_norm2_ = norm2_.empty() ? 0.0 : *std::max_element(norm2_.begin(), norm2_.end());
}

cplx VariantDictionary::correlate(std::size_t j, const ComplexImage& image) const {
  const GridSpec& g = grid();
  return kernels::correlate_at(atom(j), j / g.n_range, j % g.n_range, image);
}

void VariantDictionary::deposit(std::size_t j, cplx coeff, ComplexImage& image) const {
  const GridSpec& g = grid();
  kernels::deposit(atom(j), j / g.n_range, j % g.n_range, coeff, image);
}

ComplexImage VariantDictionary::apply(const ComplexImage& coeffs) const {
  ComplexImage out;
  kernels::apply(*bank_, coeffs, out, execution_);
  return out;
}

ComplexImage VariantDictionary::adjoint(const ComplexImage& image) const {
  ComplexImage out(grid());
  kernels::adjoint(*bank_, image, out, execution_);
  return out;
}

}  // namespace nfsar
