#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>

#include "nfsar/geometry.hpp"
#include "nfsar/image.hpp"
#include "nfsar/solver.hpp"

namespace nfsar {

struct IstaConfig {
  double lambda_reg = 0.0;
  double step = 0.0;  // 0 selects 0.99 / L_op
  std::size_t max_iterations = 500;
  double tolerance = 1e-6;
  double power_tolerance = 1e-6;
  std::size_t power_max_iterations = 2000;
  std::uint64_t power_seed = 7;
};

struct CleanConfig {
  double loop_gain = 0.5;
  double stop_threshold_db = -25.0;
  std::size_t max_components = 1000;

  void validate() const;
};

/// Shift-invariant 'same'-size convolution with a single PSF, evaluated with
/// zero-padded FFTs. adjoint() is the matching correlation.
class InvariantOperator {
 public:
  InvariantOperator(const PsfPatch& psf, const GridSpec& grid);
  ~InvariantOperator();
  InvariantOperator(const InvariantOperator&) = delete;
  InvariantOperator& operator=(const InvariantOperator&) = delete;

  ComplexImage apply(const ComplexImage& x) const;
  ComplexImage adjoint(const ComplexImage& y) const;

  /// Largest eigenvalue of H^H H by power iteration. Throws std::runtime_error
  /// if the relative change does not fall below `tolerance`.
  double estimate_norm2(double tolerance, std::size_t max_iterations, std::uint64_t seed) const;

  std::size_t padded_azimuth() const;
  std::size_t padded_range() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// PSF of the grid-center cell.
const PsfPatch& center_psf(const PsfBank& bank);

/// Proximal gradient (ISTA) under the shift-invariant model:
/// x <- S(x + mu H^H (y - H x), mu lambda).
RestorationResult ista_restore(const ComplexImage& y, const PsfPatch& center, const IstaConfig& config);

/// Greedy CLEAN with spatial-variant PSFs from the bank.
RestorationResult clean_restore(const ComplexImage& y, const PsfBank& bank, const CleanConfig& config);

}  // namespace nfsar
