#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "nfsar/execution.hpp"
#include "nfsar/image.hpp"

namespace nfsar {

inline constexpr double speed_of_light = 299792458.0;  // m/s
inline constexpr double pi = 3.14159265358979323846;

/// Radar and aperture parameters plus the image grid. The coordinate origin is
/// the array center; the rail runs along the azimuth axis.
struct ImagingGeometry {
  double center_frequency_hz = 10e9;
  double transmit_bandwidth_hz = 2e9;
  double rail_length_m = 5.0;
  double array_center_azimuth_m = 0.0;
  double array_center_range_m = 0.0;
  GridSpec grid;

  double lambda_rf() const { return speed_of_light / center_frequency_hz; }

  /// Azimuth/range of a cell relative to the array center.
  double rel_azimuth(std::size_t ia) const { return grid.azimuth_of(ia) - array_center_azimuth_m; }
  double rel_range(std::size_t ir) const { return grid.range_of(ir) - array_center_range_m; }

  /// Throws std::invalid_argument on non-positive radar parameters, bad grid,
  /// or a grid that reaches the array plane.
  void validate() const;

  /// Square grid of n x n cells centered at (0, standoff).
  static ImagingGeometry centered(double standoff_m, std::size_t n_azimuth, std::size_t n_range,
                                  double spacing_azimuth_m, double spacing_range_m);

  bool operator==(const ImagingGeometry&) const = default;
};

struct Resolutions {
  double range_m = 0.0;
  double azimuth_m = 0.0;
};

/// rho_r = c / (2 B_T); rho_a = lambda R / (2 L).
Resolutions resolutions(const ImagingGeometry& geometry, double slant_range_m);

double slant_range(const ImagingGeometry& geometry, double target_azimuth_m, double target_range_m);

/// Line-of-sight angle from boresight, atan(azimuth / range), in (-pi/2, pi/2).
double observation_angle(const ImagingGeometry& geometry, double target_azimuth_m,
                         double target_range_m);

/// sin(pi t) / (pi t), with sinc(0) = 1.
double sinc(double t);

/// Rotated separable sinc at a (range, azimuth) offset from the PSF center.
double rotated_sinc(double d_range_m, double d_azimuth_m, double angle_rad, const Resolutions& res);

struct PsfTruncation {
  double min_level_db = -40.0;
  std::size_t fixed_patch_cells = 0;  // odd >= 3 overrides min_level_db

  bool operator==(const PsfTruncation&) const = default;
};

/// Peak-normalized spatial-variant PSF sampled on the grid spacing. Rows run
/// along azimuth, columns along range; the center sample is the peak.
struct PsfPatch {
  std::size_t half_azimuth = 0;
  std::size_t half_range = 0;
  std::vector<double> samples;
  double center_slant_range_m = 0.0;
  double observation_angle_rad = 0.0;
  double resolution_range_m = 0.0;
  double resolution_azimuth_m = 0.0;
  bool clamped = false;  // bounding box exceeded the grid and was cut back

  std::size_t rows() const { return 2 * half_azimuth + 1; }
  std::size_t cols() const { return 2 * half_range + 1; }
  std::size_t truncation_radius_cells() const { return std::max(half_azimuth, half_range); }
  double at(std::size_t row, std::size_t col) const { return samples[row * cols() + col]; }
  double center() const { return at(half_azimuth, half_range); }

  bool operator==(const PsfPatch&) const = default;
};

/// PSF for a point at the given slant range and observation angle.
PsfPatch synthesize_psf_at(const ImagingGeometry& geometry, double slant_range_m, double angle_rad,
                           const PsfTruncation& truncation = {});

/// PSF for a target at (azimuth, range); the target must lie inside the grid.
PsfPatch synthesize_psf(const ImagingGeometry& geometry, double target_azimuth_m,
                        double target_range_m, const PsfTruncation& truncation = {});

struct PsfQuantization {
  double range_step_m = 1.0;
  double angle_step_rad = 0.5 * pi / 180.0;

  static PsfQuantization invariant() {
    return {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  }
  bool operator==(const PsfQuantization&) const = default;
};

/// Memoized PSFs keyed by quantized (slant range, angle). Bins are counted
/// from the grid-center cell, so infinite steps give the single scene-center
/// PSF.
class PsfBank {
 public:
  using Key = std::pair<std::int64_t, std::int64_t>;

  const ImagingGeometry& geometry() const { return geometry_; }
  const PsfQuantization& quantization() const { return quantization_; }
  const PsfTruncation& truncation() const { return truncation_; }

  std::size_t size() const { return patches_.size(); }
  const std::vector<PsfPatch>& patches() const { return patches_; }
  const std::vector<Key>& keys() const { return keys_; }

  std::uint32_t patch_index(std::size_t cell) const { return cell_patch_[cell]; }
  const PsfPatch& lookup(std::size_t cell) const { return patches_[cell_patch_[cell]]; }
  const PsfPatch& lookup(std::size_t ia, std::size_t ir) const {
    return lookup(geometry_.grid.index(ia, ir));
  }

  /// Bin center (slant range, angle) of a key.
  std::pair<double, double> bin_center(const Key& key) const;
  Key key_for(double slant_range_m, double angle_rad) const;

  bool operator==(const PsfBank&) const = default;

 private:
  friend PsfBank build_psf_bank(const ImagingGeometry&, const PsfQuantization&,
                                const PsfTruncation&, Execution);

  ImagingGeometry geometry_;
  PsfQuantization quantization_;
  PsfTruncation truncation_;
  double reference_range_m_ = 0.0;
  double reference_angle_rad_ = 0.0;
  double min_range_m_ = 0.0;
  double max_range_m_ = 0.0;
  double min_angle_rad_ = 0.0;
  double max_angle_rad_ = 0.0;
  std::vector<Key> keys_;
  std::vector<PsfPatch> patches_;
  std::vector<std::uint32_t> cell_patch_;
};

PsfBank build_psf_bank(const ImagingGeometry& geometry, const PsfQuantization& quantization = {},
                       const PsfTruncation& truncation = {},
                       Execution execution = Execution::parallel);

/// -3 dB (half-power) width of the lobe containing `peak` in a magnitude
/// profile, with linear interpolation of the crossings. Returns the width in
/// units of `spacing`; infinity if a crossing is not found.
double mainlobe_width_3db(std::span<const double> magnitudes, std::size_t peak, double spacing);

struct PsfWidths {
  double along_los_m = 0.0;     // range direction rotated to the line of sight
  double across_los_m = 0.0;
};

/// Half-power widths of the continuous PSF along and across the line of sight,
/// measured on a fine 1D sampling of the closed form.
PsfWidths measure_psf_widths(const Resolutions& res, double angle_rad);

}  // namespace nfsar
