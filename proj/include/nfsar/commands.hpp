#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nfsar/config.hpp"
#include "nfsar/metrics.hpp"
#include "nfsar/simulate.hpp"
#include "nfsar/solver.hpp"

namespace nfsar::cli {

/// Flags shared by every subcommand.
struct Options {
  std::optional<std::filesystem::path> config;
  std::string scene = "paper1";  // file path, "paper1" or "paper2"
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> grid;
  std::optional<std::filesystem::path> out;
};

inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_usage = 2;

/// Config file (or defaults) with --seed/--grid/--out applied. Built-in paper2
/// without a config file recenters the grid at 21 m so all three targets fit.
RunConfig effective_config(const Options& options);
SceneSpec resolve_scene(const std::string& name);

int cmd_simulate(const Options& options, std::ostream& out, std::ostream& err);
int cmd_psf(const Options& options, double azimuth_m, double range_m, std::ostream& out, std::ostream& err);
int cmd_restore(const Options& options, const std::filesystem::path& image_file, const std::string& method,
                std::ostream& out, std::ostream& err);
int cmd_evaluate(const Options& options, const std::filesystem::path& coefficients_file, const std::string& method,
                 std::ostream& out, std::ostream& err);
int cmd_bench(const Options& options, std::ostream& out, std::ostream& err);

struct LambdaTrial {
  std::string method;
  double fraction = 0.0;
  double lambda = 0.0;
  std::optional<double> mean_amplitude_error_db;
  std::size_t detections = 0;
  std::size_t misses = 0;
  std::size_t iterations = 0;
  bool converged = false;
};

struct MethodOutcome {
  std::string method;
  RestorationResult result;
  MatchReport report;
  double lambda = 0.0;
  double fraction = 0.0;
  std::optional<std::string> error;
};

struct BenchOutcome {
  RunConfig config;
  SceneSpec scene;
  ImagingGeometry geometry;
  std::optional<NoiseSpec> noise;
  double gate_radius_m = 0.0;
  ComplexImage ideal;
  ComplexImage degraded;
  std::vector<MethodOutcome> methods;  // proposed, ISTA, CLEAN
  std::vector<LambdaTrial> trials;
  ComparisonTable table;

  const MethodOutcome* find(const std::string& method) const;
};

/// Simulates the scene, restores it with every method (sweeping the lambda
/// fractions for the two lasso methods and keeping, per method, the trial with
/// fewest misses and then lowest mean amplitude error) and evaluates the
/// results. Progress and timings go to `log`.
BenchOutcome run_benchmark(const RunConfig& config, const SceneSpec& scene, std::ostream& log);

/// Writes scene, images, heatmaps, traces, the comparison table and a
/// manifest. Every artifact is a pure function of the outcome.
void write_bench_artifacts(const BenchOutcome& outcome, const std::filesystem::path& dir);

}  // namespace nfsar::cli
