#include "nfsar/simulate.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "nfsar/kernels.hpp"

namespace nfsar {

cplx Scatterer::complex_amplitude() const {
  return std::polar(std::pow(10.0, amplitude_dbsm / 20.0), phase_rad);
}

ComplexImage render_ideal(const SceneSpec& scene, const ImagingGeometry& geometry) {
  geometry.validate();
  ComplexImage image(geometry.grid);
  std::unordered_map<std::size_t, std::size_t> occupied;
  for (std::size_t i = 0; i < scene.scatterers.size(); ++i) {
    const Scatterer& s = scene.scatterers[i];
    GridSpec::Cell cell;
    if (!std::isfinite(s.amplitude_dbsm) || !std::isfinite(s.phase_rad) ||
        !geometry.grid.nearest_cell(s.azimuth_m, s.range_m, cell)) {
      std::ostringstream msg;
      msg << "scatterer " << i << " at (azimuth " << s.azimuth_m << " m, range " << s.range_m
          << " m) is outside the imaging grid or non-finite";
      throw std::invalid_argument(msg.str());
    }
    const std::size_t j = geometry.grid.index(cell.azimuth, cell.range);
    if (auto [it, inserted] = occupied.emplace(j, i); !inserted) {
      std::ostringstream msg;
      msg << "scatterers " << it->second << " and " << i << " occupy the same grid cell";
      throw std::invalid_argument(msg.str());
    }
    image[j] = s.complex_amplitude();
  }
  return image;
}

ComplexImage degrade(const SceneSpec& scene, const ImagingGeometry& geometry, const PsfBank& bank,
                     const std::optional<NoiseSpec>& noise, Execution execution) {
  if (!(bank.geometry() == geometry)) {
    throw std::invalid_argument("PSF bank was built for a different geometry");
  }
  const ComplexImage ideal = render_ideal(scene, geometry);
  ComplexImage out;
  kernels::apply(bank, ideal, out, execution);
  if (noise) add_clutter(out, *noise);
  return out;
}

void add_clutter(ComplexImage& image, const NoiseSpec& noise) {
  if (!std::isfinite(noise.clutter_power_db)) throw std::invalid_argument("clutter power must be finite");
  std::mt19937_64 rng(noise.rng_seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(std::pow(10.0, noise.clutter_power_db / 10.0) / 2.0));
  for (auto& v : image.data()) {
    const double re = normal(rng);
    const double im = normal(rng);
    v += cplx{re, im};
  }
}

SceneSpec paper_scene_1() {
  constexpr double cell = 20.0 / 256.0;
  constexpr double edge = 102 * cell;
  constexpr double cross = 4 * cell;
  constexpr double center = 25.0;
  SceneSpec scene;
  scene.label = "paper1";
  const double perimeter[8][2] = {{-edge, -edge}, {0.0, -edge}, {edge, -edge}, {edge, 0.0},
                                  {edge, edge},   {0.0, edge},  {-edge, edge}, {-edge, 0.0}};
  int k = 0;
  for (const auto& p : perimeter) {
    scene.scatterers.push_back({p[0], center + p[1], -10.0, 0.7 * k++});
  }
  const double inner[4][2] = {{0.0, -cross}, {cross, 0.0}, {0.0, cross}, {-cross, 0.0}};
  for (const auto& p : inner) {
    scene.scatterers.push_back({p[0], center + p[1], -10.0, 0.7 * k++});
  }
  scene.scatterers.push_back({0.0, center + cross + 2 * cell, -20.0, 0.7 * k});
  return scene;
}

SceneSpec paper_scene_2() {
  SceneSpec scene;
  scene.label = "paper2";
  scene.scatterers = {{0.0, 14.0, -30.0, 0.0}, {0.0, 21.0, -30.0, 0.0}, {0.0, 28.0, -30.0, 0.0}};
  return scene;
}

ImagingGeometry default_geometry(std::size_t n, double standoff_m, double extent_m) {
  if (n < 1) throw std::invalid_argument("grid size must be >= 1");
  const double spacing = extent_m / static_cast<double>(n);
  return ImagingGeometry::centered(standoff_m, n, n, spacing, spacing);
}

}  // namespace nfsar
