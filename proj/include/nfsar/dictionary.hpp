#pragma once

#include <cstddef>
#include <vector>

#include "nfsar/execution.hpp"
#include "nfsar/geometry.hpp"
#include "nfsar/image.hpp"

namespace nfsar {

/// Spatial-variant dictionary: one atom per grid cell, the bank PSF of that
/// cell centered on it and clipped to the grid. Atoms are read from the bank on
/// demand; only their squared norms are cached. The bank must outlive the
/// dictionary.
class VariantDictionary {
 public:
  explicit VariantDictionary(const PsfBank& bank, Execution execution = Execution::parallel);

  const PsfBank& bank() const { return *bank_; }
  const GridSpec& grid() const { return bank_->geometry().grid; }
  std::size_t atom_count() const { return norm2_.size(); }
  const PsfPatch& atom(std::size_t j) const { return bank_->lookup(j); }
  double atom_norm2(std::size_t j) const { return norm2_[j]; }
  double max_atom_norm2() const { return max_norm2_; }

  /// <d_j, image>
  cplx correlate(std::size_t j, const ComplexImage& image) const;
  /// image += coeff * d_j
  void deposit(std::size_t j, cplx coeff, ComplexImage& image) const;

  /// sum_j coeffs(j) d_j
  ComplexImage apply(const ComplexImage& coeffs) const;
  /// cell j receives <d_j, image>
  ComplexImage adjoint(const ComplexImage& image) const;

  Execution execution() const { return execution_; }

 private:
  const PsfBank* bank_;
  Execution execution_;
  std::vector<double> norm2_;
  double max_norm2_ = 0.0;
};

}  // namespace nfsar
