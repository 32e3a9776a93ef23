#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "nfsar/image.hpp"
#include "nfsar/simulate.hpp"

namespace nfsar {

struct ExtractedScatterer {
  double azimuth_m = 0.0;
  double range_m = 0.0;
  cplx amplitude;
  bool peak = true;  // strict local maximum of |coefficient|
  std::size_t cell = 0;
};

/// Strict local maxima of |coefficients| over the 8-neighborhood, within
/// min_level_db of the global peak, in row-major order.
std::vector<ExtractedScatterer> extract_scatterers(const ComplexImage& coefficients,
                                                   double min_level_db);

struct MatchedPair {
  std::size_t truth = 0;
  std::size_t estimate = 0;
  double amplitude_error_db = 0.0;
  double position_error_m = 0.0;
};

struct MatchReport {
  std::vector<MatchedPair> pairs;
  std::vector<std::size_t> misses;        // truth indices
  std::vector<std::size_t> false_alarms;  // estimate indices
  std::optional<double> mean_amplitude_error_db;
  std::optional<double> max_position_error_m;
  std::optional<double> mean_position_error_m;

  std::size_t detections() const { return pairs.size(); }
};

/// Greedy global-nearest matching inside the gate. Ties break on truth index,
/// then on estimate position, so estimate order never matters.
MatchReport match_scatterers(const std::vector<ExtractedScatterer>& estimates, const SceneSpec& truth,
                             double gate_radius_m);

/// 3 x max(rho_r, rho_a at the farthest cell).
double default_gate_radius(const ImagingGeometry& geometry);

struct MethodReport {
  std::string method;
  MatchReport report;
};

struct ComparisonRow {
  std::string method;
  std::optional<double> mean_amplitude_error_db;
  std::optional<double> max_position_error_m;
  std::optional<double> mean_position_error_m;
  std::optional<std::size_t> detections;
  std::optional<std::size_t> false_alarms;
  std::optional<std::size_t> misses;
  bool reference = false;
  std::string note;
};

struct ComparisonTable {
  std::vector<ComparisonRow> rows;
  double lambda_rf_m = 0.0;
  double stated_position_bound_m = 0.0375;
};

struct ReferenceValue {
  const char* method;
  double mean_amplitude_error_db;
};
/// Published simulated-scene mean amplitude errors.
inline constexpr ReferenceValue published_reference[] = {
    {"proposed", 0.85}, {"ISTA", 1.74}, {"IAA", 2.15}, {"CLEAN", 4.19}};

/// Computed rows in input order, then the reference rows.
ComparisonTable comparison_report(const std::vector<MethodReport>& reports, double lambda_rf_m);

std::string format_table_text(const ComparisonTable& table);
std::string format_table_csv(const ComparisonTable& table);

}  // namespace nfsar
