#include "nfsar/solver.hpp"

#include <cmath>
#include <stdexcept>

namespace nfsar {

void SolverConfig::validate() const {
  if (!(lambda_reg >= 0.0) || !std::isfinite(lambda_reg)) throw std::invalid_argument("lambda_reg must be >= 0");
  if (max_sweeps < 1) throw std::invalid_argument("max_sweeps must be >= 1");
  if (!(objective_tolerance > 0.0)) throw std::invalid_argument("objective_tolerance must be > 0");
  if (active_set_threshold && !(*active_set_threshold >= 0.0)) {
    throw std::invalid_argument("active_set_threshold must be >= 0");
  }
  if (refresh_interval < 1) throw std::invalid_argument("refresh_interval must be >= 1");
  if (step_mode == StepMode::global && global_step < 0.0) throw std::invalid_argument("global_step must be > 0");
}

cplx soft_threshold(cplx value, double threshold) {
  if (!(threshold >= 0.0)) throw std::invalid_argument("soft threshold must be >= 0");
  const double mag = std::abs(value);
  if (mag <= threshold) return {0.0, 0.0};
  return value * ((mag - threshold) / mag);
}

double default_lambda(const VariantDictionary& dict, const ComplexImage& y, double fraction) {
  return fraction * dict.adjoint(y).max_abs();
}

double lasso_objective(const ComplexImage& residual, const ComplexImage& coefficients, double lambda) {
  double l1 = 0.0;
  for (const auto& c : coefficients.data()) l1 += std::abs(c);
  return 0.5 * residual.norm2() + lambda * l1;
}

RestorationResult restore(const ComplexImage& y, const VariantDictionary& dict, const SolverConfig& config) {
  config.validate();
  require_same_grid(dict.grid(), y.grid(), "restore");
  if (!y.all_finite()) throw std::invalid_argument("input image has non-finite samples");

  const double lambda = config.lambda_reg;
  double mu = 0.0;
  if (config.step_mode == StepMode::global) {
    const double bound = 1.0 / dict.max_atom_norm2();
    mu = config.global_step == 0.0 ? bound : config.global_step;
    if (mu > bound * (1.0 + 1e-12)) throw std::invalid_argument("global step exceeds 1 / max ||d_j||^2");
  }
  const double threshold = config.active_set_threshold.value_or(lambda / 10.0);

  RestorationResult result;
  result.method = "proposed";
  result.coefficients = ComplexImage(y.grid());
  result.residual = y;
  ComplexImage& x = result.coefficients;
  ComplexImage& r = result.residual;

  double j_prev = lasso_objective(r, x, lambda);
  result.objective_trace.push_back(j_prev);
  if (j_prev == 0.0) {
    result.converged = true;
    return result;
  }

  std::vector<std::size_t> active;
  bool refresh_due = true;
  for (std::size_t sweep = 0; sweep < config.max_sweeps; ++sweep) {
    bool refreshed = false;
    bool inactive_ok = true;
    if (refresh_due || sweep % config.refresh_interval == 0) {
      const ComplexImage corr = dict.adjoint(r);
      active.clear();
      for (std::size_t j = 0; j < corr.size(); ++j) {
        const double c = std::abs(corr[j]);
        if (x[j] != cplx{} || c > threshold) active.push_back(j);
        if (x[j] == cplx{} && c > lambda) inactive_ok = false;
      }
      refreshed = true;
      refresh_due = false;
      ++result.refreshes;
    }

    for (const std::size_t j : active) {
      const double n2 = dict.atom_norm2(j);
      const cplx corr = dict.correlate(j, r);
      cplx updated;
      if (config.step_mode == StepMode::exact) {
        updated = soft_threshold(corr + n2 * x[j], lambda) / n2;
      } else {
        updated = soft_threshold(x[j] + mu * corr, lambda * mu);
      }
      const cplx delta = updated - x[j];
      if (delta != cplx{}) {
        dict.deposit(j, -delta, r);
        x[j] = updated;
      }
      ++result.coordinate_updates;
    }

    const double j_now = lasso_objective(r, x, lambda);
    result.objective_trace.push_back(j_now);
    result.sweeps = sweep + 1;
    const double rel = j_prev > 0.0 ? (j_prev - j_now) / j_prev : 0.0;
    j_prev = j_now;
    if (rel < config.objective_tolerance) {
      if (refreshed && inactive_ok) {
        result.converged = true;
        break;
      }
      refresh_due = true;
    }
  }
  return result;
}

}  // namespace nfsar
