#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nfsar/baselines.hpp"
#include "nfsar/geometry.hpp"
#include "nfsar/simulate.hpp"
#include "nfsar/solver.hpp"

namespace nfsar {

struct GeometryBlock {
  double f0_hz = 10e9;
  double bandwidth_hz = 2e9;
  double rail_length_m = 5.0;
  double standoff_m = 25.0;
  std::size_t n_azimuth = 256;
  std::size_t n_range = 256;
  double spacing_azimuth_m = 20.0 / 256.0;
  double spacing_range_m = 20.0 / 256.0;

  ImagingGeometry to_geometry() const;
  /// n x n cells over the current extent.
  void resize_grid(std::size_t n);
  bool operator==(const GeometryBlock&) const = default;
};

struct PsfBlock {
  double min_level_db = -40.0;
  std::size_t fixed_patch_cells = 0;
  double range_step_m = 1.0;
  double angle_step_deg = 0.5;

  PsfTruncation truncation() const { return {min_level_db, fixed_patch_cells}; }
  PsfQuantization quantization() const { return {range_step_m, angle_step_deg * pi / 180.0}; }
  bool operator==(const PsfBlock&) const = default;
};

struct SolverBlock {
  std::optional<double> lambda_reg;  // absolute; overrides lambda_fraction
  double lambda_fraction = 0.05;     // of max |adjoint(y)|
  std::string step_mode = "exact";
  double global_step = 0.0;
  std::size_t max_sweeps = 200;
  double objective_tolerance = 1e-6;
  std::optional<double> active_set_threshold;
  std::size_t refresh_interval = 5;

  SolverConfig to_config(double lambda) const;
  bool operator==(const SolverBlock&) const = default;
};

struct IstaBlock {
  std::optional<double> lambda_reg;
  double lambda_fraction = 0.05;
  double step = 0.0;
  std::size_t max_iterations = 500;
  double tolerance = 1e-6;

  IstaConfig to_config(double lambda) const;
  bool operator==(const IstaBlock&) const = default;
};

struct CleanBlock {
  double loop_gain = 0.5;
  double stop_threshold_db = -25.0;
  std::size_t max_components = 0;  // 0: 10 x scene size (1000 when unknown)

  CleanConfig to_config(std::size_t scene_size) const;
  bool operator==(const CleanBlock&) const = default;
};

struct NoiseBlock {
  bool enabled = true;
  std::optional<double> clutter_power_db;  // default: weakest scatterer - 15 dB

  std::optional<NoiseSpec> to_spec(const SceneSpec& scene, std::uint64_t seed) const;
  bool operator==(const NoiseBlock&) const = default;
};

struct MetricsBlock {
  double extract_min_level_db = -30.0;
  std::optional<double> gate_radius_m;  // default 3 x max resolution
  bool operator==(const MetricsBlock&) const = default;
};

struct BenchBlock {
  std::vector<double> lambda_fractions = {0.003, 0.01, 0.03, 0.1};
  bool operator==(const BenchBlock&) const = default;
};

struct RunConfig {
  GeometryBlock geometry;
  PsfBlock psf;
  SolverBlock solver;
  IstaBlock ista;
  CleanBlock clean;
  NoiseBlock noise;
  MetricsBlock metrics;
  BenchBlock bench;
  double heatmap_range_db = 40.0;
  std::uint64_t seed = 1;
  std::string output_dir = "out";

  void validate() const;
  bool operator==(const RunConfig&) const = default;
};

/// Missing keys take defaults; unknown keys are rejected.
RunConfig parse_config(const std::string& json_text);
std::string serialize_config(const RunConfig& config);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace nfsar
