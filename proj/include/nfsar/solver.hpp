#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "nfsar/dictionary.hpp"
#include "nfsar/metrics.hpp"

namespace nfsar {

enum class StepMode {
  exact,   // mu_j = 1 / ||d_j||^2, exact coordinate minimizer
  global,  // one mu for every coordinate, mu <= 1 / max ||d_j||^2
};

struct SolverConfig {
  double lambda_reg = 0.0;
  StepMode step_mode = StepMode::exact;
  double global_step = 0.0;  // 0 selects 1 / max ||d_j||^2
  std::size_t max_sweeps = 200;
  double objective_tolerance = 1e-6;
  std::optional<double> active_set_threshold;  // default lambda / 10
  std::size_t refresh_interval = 5;            // sweeps between full correlation scans

  void validate() const;
};

struct RestorationResult {
  std::string method;
  ComplexImage coefficients;
  ComplexImage residual;
  std::vector<double> objective_trace;  // entry 0 is J at x = 0
  std::size_t sweeps = 0;
  bool converged = false;
  std::vector<ExtractedScatterer> scatterers;
  std::size_t refreshes = 0;
  std::size_t coordinate_updates = 0;
  std::vector<double> residual_peak_trace;  // CLEAN only: max |r| before each component
};

/// (value / |value|) max(|value| - threshold, 0); 0 for value 0.
cplx soft_threshold(cplx value, double threshold);

/// fraction * max_j |<d_j, y>|
double default_lambda(const VariantDictionary& dict, const ComplexImage& y, double fraction = 0.05);

/// 1/2 ||residual||^2 + lambda ||x||_1
double lasso_objective(const ComplexImage& residual, const ComplexImage& coefficients, double lambda);

/// Sparse spatial-variant deconvolution by cyclic coordinate descent.
///
/// Starting from x = 0 the residual r = y - D x is kept up to date. Each sweep
/// visits the active coordinates in row-major order and replaces x_j by the
/// proximal update
///
///     x_j <- S(x_j + mu_j <d_j, r>, lambda mu_j),
///
/// which with mu_j = 1/||d_j||^2 is the exact minimizer of the objective along
/// coordinate j. Every `refresh_interval` sweeps (and whenever the objective
/// stalls) all correlations <d_j, r> are recomputed in parallel and the
/// active set becomes {j : x_j != 0 or |<d_j, r>| > threshold}. The run stops
/// when a sweep that started from a refresh showed no inactive coordinate
/// above lambda and the relative decrease of J fell below the tolerance.
RestorationResult restore(const ComplexImage& y, const VariantDictionary& dict, const SolverConfig& config);

}  // namespace nfsar
