#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nfsar/execution.hpp"
#include "nfsar/geometry.hpp"
#include "nfsar/image.hpp"

namespace nfsar {

/// Ideal point scatterer. Linear amplitude is 10^(dBsm / 20).
struct Scatterer {
  double azimuth_m = 0.0;
  double range_m = 1.0;
  double amplitude_dbsm = 0.0;
  double phase_rad = 0.0;

  cplx complex_amplitude() const;
  bool operator==(const Scatterer&) const = default;
};

struct SceneSpec {
  std::string label;
  std::vector<Scatterer> scatterers;

  bool operator==(const SceneSpec&) const = default;
};

/// Additive circular complex Gaussian clutter; power in dB relative to the
/// peak of a 0 dBsm scatterer.
struct NoiseSpec {
  double clutter_power_db = -35.0;
  std::uint64_t rng_seed = 1;
};

/// Each scatterer's complex amplitude placed at its nearest grid cell.
/// Throws std::invalid_argument naming the first out-of-grid scatterer, or two
/// scatterers that share a cell.
ComplexImage render_ideal(const SceneSpec& scene, const ImagingGeometry& geometry);

/// Y = sum_i a_i D_i + N, with D_i the bank PSF of the scatterer's cell.
ComplexImage degrade(const SceneSpec& scene, const ImagingGeometry& geometry, const PsfBank& bank,
                     const std::optional<NoiseSpec>& noise = std::nullopt,
                     Execution execution = Execution::parallel);

/// Adds seeded clutter in place.
void add_clutter(ComplexImage& image, const NoiseSpec& noise);

/// 20 m x 20 m scene at 25 m standoff: eight -10 dBsm targets on a 16 m
/// square, four -10 dBsm targets on a cross at the center, and one -20 dBsm
/// target two cells from the cross. Coordinates sit on the nodes of the
/// default 256-cell grid.
SceneSpec paper_scene_1();

/// Three -30 dBsm targets at the scene-center azimuth, ranges 14, 21, 28 m.
SceneSpec paper_scene_2();

/// Square grid of n cells per side spanning `extent_m`, centered at
/// (0, standoff_m), with radar defaults of 10 GHz / 2 GHz / 5 m.
ImagingGeometry default_geometry(std::size_t n, double standoff_m = 25.0, double extent_m = 20.0);

}  // namespace nfsar
