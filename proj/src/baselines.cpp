#include "nfsar/baselines.hpp"

#include <fftw3.h>

#include <cmath>
#include <algorithm>
#include <random>
#include <stdexcept>
#include <tuple>

#include "nfsar/kernels.hpp"

namespace nfsar {

namespace {

/// Smallest n' >= n whose only prime factors are 2, 3, 5, 7.
std::size_t fft_size(std::size_t n) {
  for (std::size_t m = std::max<std::size_t>(n, 1);; ++m) {
    std::size_t k = m;
    for (std::size_t p : {2, 3, 5, 7}) {
      while (k % p == 0) k /= p;
    }
    if (k == 1) return m;
  }
}

struct FftwFree {
  void operator()(fftw_complex* p) const { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<fftw_complex, FftwFree>;

FftwBuffer make_buffer(std::size_t n) {
  auto* p = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  if (p == nullptr) throw std::bad_alloc();
  return FftwBuffer(p);
}

}  // namespace

struct InvariantOperator::Impl {
  GridSpec grid;
  std::size_t pa = 0;
  std::size_t pr = 0;
  FftwBuffer kernel;  // FFT of the PSF with its center at index (0, 0)
  FftwBuffer work;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  ~Impl() {
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }

  ComplexImage convolve(const ComplexImage& in, bool conjugate) const {
    const std::size_t total = pa * pr;
    fftw_complex* w = work.get();
    for (std::size_t i = 0; i < total; ++i) w[i][0] = w[i][1] = 0.0;
    for (std::size_t ia = 0; ia < grid.n_azimuth; ++ia) {
      for (std::size_t ir = 0; ir < grid.n_range; ++ir) {
        w[ia * pr + ir][0] = in(ia, ir).real();
        w[ia * pr + ir][1] = in(ia, ir).imag();
      }
    }
    fftw_execute(forward);
    const fftw_complex* k = kernel.get();
    for (std::size_t i = 0; i < total; ++i) {
      const double kr = k[i][0];
      const double ki = conjugate ? -k[i][1] : k[i][1];
      const double xr = w[i][0];
      const double xi = w[i][1];
      w[i][0] = xr * kr - xi * ki;
      w[i][1] = xr * ki + xi * kr;
    }
    fftw_execute(backward);
    const double scale = 1.0 / static_cast<double>(total);
    ComplexImage out(grid);
    for (std::size_t ia = 0; ia < grid.n_azimuth; ++ia) {
      for (std::size_t ir = 0; ir < grid.n_range; ++ir) {
        out(ia, ir) = {w[ia * pr + ir][0] * scale, w[ia * pr + ir][1] * scale};
      }
    }
    return out;
  }
};

InvariantOperator::InvariantOperator(const PsfPatch& psf, const GridSpec& grid) : impl_(std::make_unique<Impl>()) {
  grid.validate();
  Impl& m = *impl_;
  m.grid = grid;
  // Linear (non-wrapping) convolution needs at least n + half-width samples.
  m.pa = fft_size(grid.n_azimuth + psf.half_azimuth);
  m.pr = fft_size(grid.n_range + psf.half_range);
  const std::size_t total = m.pa * m.pr;
  m.kernel = make_buffer(total);
  m.work = make_buffer(total);

  fftw_complex* k = m.kernel.get();
  for (std::size_t i = 0; i < total; ++i) k[i][0] = k[i][1] = 0.0;
  for (std::size_t row = 0; row < psf.rows(); ++row) {
    const std::size_t ka = (row + m.pa - psf.half_azimuth) % m.pa;
    for (std::size_t col = 0; col < psf.cols(); ++col) {
      const std::size_t kr = (col + m.pr - psf.half_range) % m.pr;
      k[ka * m.pr + kr][0] += psf.at(row, col);
    }
  }
  const int na = static_cast<int>(m.pa);
  const int nr = static_cast<int>(m.pr);
  fftw_plan kplan = fftw_plan_dft_2d(na, nr, k, k, FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_execute(kplan);
  fftw_destroy_plan(kplan);
  m.forward = fftw_plan_dft_2d(na, nr, m.work.get(), m.work.get(), FFTW_FORWARD, FFTW_ESTIMATE);
  m.backward = fftw_plan_dft_2d(na, nr, m.work.get(), m.work.get(), FFTW_BACKWARD, FFTW_ESTIMATE);
}

InvariantOperator::~InvariantOperator() = default;

ComplexImage InvariantOperator::apply(const ComplexImage& x) const {
  require_same_grid(impl_->grid, x.grid(), "invariant apply");
  return impl_->convolve(x, false);
}

ComplexImage InvariantOperator::adjoint(const ComplexImage& y) const {
  require_same_grid(impl_->grid, y.grid(), "invariant adjoint");
  return impl_->convolve(y, true);
}

std::size_t InvariantOperator::padded_azimuth() const { return impl_->pa; }
std::size_t InvariantOperator::padded_range() const { return impl_->pr; }

double InvariantOperator::estimate_norm2(double tolerance, std::size_t max_iterations, std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  ComplexImage v(impl_->grid);
  for (auto& s : v.data()) s = {normal(rng), normal(rng)};
  double norm = std::sqrt(v.norm2());
  double estimate = 0.0;
  for (std::size_t it = 0; it < max_iterations; ++it) {
    for (auto& s : v.data()) s /= norm;
    v = adjoint(apply(v));
    norm = std::sqrt(v.norm2());
    const double previous = estimate;
    estimate = norm;
    if (it > 0 && std::abs(estimate - previous) < tolerance * estimate) return estimate;
  }
  throw std::runtime_error("power iteration did not converge");
}

const PsfPatch& center_psf(const PsfBank& bank) {
  const GridSpec& g = bank.geometry().grid;
  return bank.lookup(g.n_azimuth / 2, g.n_range / 2);
}

RestorationResult ista_restore(const ComplexImage& y, const PsfPatch& center, const IstaConfig& config) {
  if (!(config.lambda_reg >= 0.0)) throw std::invalid_argument("lambda_reg must be >= 0");
  if (config.max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
  if (!(config.tolerance > 0.0)) throw std::invalid_argument("tolerance must be > 0");
  if (!y.all_finite()) throw std::invalid_argument("input image has non-finite samples");

  const InvariantOperator op(center, y.grid());
  const double lipschitz = op.estimate_norm2(config.power_tolerance, config.power_max_iterations, config.power_seed);
  const double mu = config.step == 0.0 ? 0.99 / lipschitz : config.step;
  if (!(mu > 0.0) || mu > 1.0 / lipschitz) throw std::invalid_argument("ISTA step violates mu <= 1 / L");

  RestorationResult result;
  result.method = "ISTA";
  result.coefficients = ComplexImage(y.grid());
  result.residual = y;
  ComplexImage& x = result.coefficients;

  double j_prev = lasso_objective(result.residual, x, config.lambda_reg);
  result.objective_trace.push_back(j_prev);
  if (j_prev == 0.0) {
    result.converged = true;
    return result;
  }
  const double shrink = mu * config.lambda_reg;
  for (std::size_t it = 0; it < config.max_iterations; ++it) {
    const ComplexImage grad = op.adjoint(result.residual);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = soft_threshold(x[i] + mu * grad[i], shrink);
    result.residual = y - op.apply(x);
    const double j_now = lasso_objective(result.residual, x, config.lambda_reg);
    result.objective_trace.push_back(j_now);
    result.sweeps = it + 1;
    const double rel = j_prev > 0.0 ? std::abs(j_prev - j_now) / j_prev : 0.0;
    j_prev = j_now;
    if (rel < config.tolerance) {
      result.converged = true;
      break;
    }
  }
  return result;
}

void CleanConfig::validate() const {
  if (!(loop_gain > 0.0 && loop_gain <= 1.0)) throw std::invalid_argument("loop gain must be in (0, 1]");
  if (max_components < 1) throw std::invalid_argument("max_components must be >= 1");
  if (!std::isfinite(stop_threshold_db)) throw std::invalid_argument("stop threshold must be finite");
}

RestorationResult clean_restore(const ComplexImage& y, const PsfBank& bank, const CleanConfig& config) {
  config.validate();
  require_same_grid(bank.geometry().grid, y.grid(), "clean");
  if (!y.all_finite()) throw std::invalid_argument("input image has non-finite samples");

  RestorationResult result;
  result.method = "CLEAN";
  result.coefficients = ComplexImage(y.grid());
  result.residual = y;
  ComplexImage& r = result.residual;
  const GridSpec& g = y.grid();

  auto argmax = [&r]() {
    std::size_t best = 0;
    double best_mag = -1.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      const double m = std::abs(r[i]);
      if (m > best_mag) {
        best_mag = m;
        best = i;
      }
    }
    return std::pair{best, best_mag};
  };

  auto [j, peak] = argmax();
  result.objective_trace.push_back(0.5 * r.norm2());
  if (peak == 0.0) {
    result.converged = true;
    return result;
  }
  const double stop_level = peak * std::pow(10.0, config.stop_threshold_db / 20.0);
  while (true) {
    result.residual_peak_trace.push_back(peak);
    if (peak < stop_level) {
      result.converged = true;
      break;
    }
    if (result.sweeps == config.max_components) break;
    const cplx estimate = config.loop_gain * r[j];
    result.coefficients[j] += estimate;
    kernels::deposit(bank.lookup(j), j / g.n_range, j % g.n_range, -estimate, r);
    ++result.sweeps;
    result.objective_trace.push_back(0.5 * r.norm2());
    std::tie(j, peak) = argmax();
  }
  return result;
}

}  // namespace nfsar
