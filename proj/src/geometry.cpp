#include "nfsar/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nfsar {

namespace {

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

std::size_t half_cells(double extent_m, double spacing_m) {
  const double cells = std::ceil(extent_m / spacing_m - 1e-9);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::max(cells, 1.0)));
}

}  // namespace

void ImagingGeometry::validate() const {
  if (!finite_positive(center_frequency_hz)) throw std::invalid_argument("center frequency must be > 0");
  if (!finite_positive(transmit_bandwidth_hz)) throw std::invalid_argument("bandwidth must be > 0");
  if (!finite_positive(rail_length_m)) throw std::invalid_argument("rail length must be > 0");
  grid.validate();
  if (!(rel_range(0) > 0.0)) {
    throw std::invalid_argument("imaging grid must lie in front of the array (range > 0)");
  }
}

ImagingGeometry ImagingGeometry::centered(double standoff_m, std::size_t n_azimuth,
                                          std::size_t n_range, double spacing_azimuth_m,
                                          double spacing_range_m) {
  ImagingGeometry g;
  g.grid.n_azimuth = n_azimuth;
  g.grid.n_range = n_range;
  g.grid.spacing_azimuth_m = spacing_azimuth_m;
  g.grid.spacing_range_m = spacing_range_m;
  g.grid.origin_azimuth_m = -static_cast<double>(n_azimuth / 2) * spacing_azimuth_m;
  g.grid.origin_range_m = standoff_m - static_cast<double>(n_range / 2) * spacing_range_m;
  return g;
}

Resolutions resolutions(const ImagingGeometry& geometry, double slant_range_m) {
  if (!finite_positive(slant_range_m)) throw std::domain_error("slant range must be > 0");
  if (!finite_positive(geometry.center_frequency_hz) || !finite_positive(geometry.transmit_bandwidth_hz) ||
      !finite_positive(geometry.rail_length_m)) {
    throw std::domain_error("degenerate imaging geometry");
  }
  return {speed_of_light / (2.0 * geometry.transmit_bandwidth_hz),
          geometry.lambda_rf() * slant_range_m / (2.0 * geometry.rail_length_m)};
}

double slant_range(const ImagingGeometry& geometry, double target_azimuth_m, double target_range_m) {
  return std::hypot(target_azimuth_m - geometry.array_center_azimuth_m,
                    target_range_m - geometry.array_center_range_m);
}

double observation_angle(const ImagingGeometry& geometry, double target_azimuth_m,
                         double target_range_m) {
  const double az = target_azimuth_m - geometry.array_center_azimuth_m;
  const double rg = target_range_m - geometry.array_center_range_m;
  if (!std::isfinite(az) || !std::isfinite(rg)) throw std::domain_error("non-finite target position");
  if (!(rg > 0.0)) throw std::domain_error("target must be in front of the array (range > 0)");
  return std::atan(az / rg);
}

double sinc(double t) {
  if (t == 0.0) return 1.0;
  const double x = pi * t;
  return std::sin(x) / x;
}

double rotated_sinc(double d_range_m, double d_azimuth_m, double angle_rad, const Resolutions& res) {
  const double c = std::cos(angle_rad);
  const double s = std::sin(angle_rad);
  const double along = d_range_m * c + d_azimuth_m * s;
  const double across = -d_range_m * s + d_azimuth_m * c;
  return sinc(along / res.range_m) * sinc(across / res.azimuth_m);
}

PsfPatch synthesize_psf_at(const ImagingGeometry& geometry, double slant_range_m, double angle_rad,
                           const PsfTruncation& truncation) {
  if (!std::isfinite(angle_rad)) throw std::domain_error("non-finite observation angle");
  const Resolutions res = resolutions(geometry, slant_range_m);
  const GridSpec& grid = geometry.grid;

  std::size_t half_az = 0;
  std::size_t half_rg = 0;
  if (truncation.fixed_patch_cells != 0) {
    if (truncation.fixed_patch_cells < 3 || truncation.fixed_patch_cells % 2 == 0) {
      throw std::invalid_argument("fixed_patch_cells must be odd and >= 3");
    }
    half_az = half_rg = (truncation.fixed_patch_cells - 1) / 2;
  } else {
    if (!(truncation.min_level_db < 0.0) || !std::isfinite(truncation.min_level_db)) {
      throw std::invalid_argument("min_level_db must be negative and finite");
    }
    // The sinc envelope 1 / (pi |t|) reaches min_level at t = 10^(-level/20) / pi.
    const double t_max = std::pow(10.0, -truncation.min_level_db / 20.0) / pi;
    const double ext_along = t_max * res.range_m;
    const double ext_across = t_max * res.azimuth_m;
    const double c = std::abs(std::cos(angle_rad));
    const double s = std::abs(std::sin(angle_rad));
    half_rg = half_cells(c * ext_along + s * ext_across, grid.spacing_range_m);
    half_az = half_cells(s * ext_along + c * ext_across, grid.spacing_azimuth_m);
  }

  PsfPatch patch;
  const std::size_t max_az = std::max<std::size_t>(1, grid.n_azimuth - 1);
  const std::size_t max_rg = std::max<std::size_t>(1, grid.n_range - 1);
  if (half_az > max_az || half_rg > max_rg) {
    patch.clamped = true;
    half_az = std::min(half_az, max_az);
    half_rg = std::min(half_rg, max_rg);
  }
  patch.half_azimuth = half_az;
  patch.half_range = half_rg;
  patch.center_slant_range_m = slant_range_m;
  patch.observation_angle_rad = angle_rad;
  patch.resolution_range_m = res.range_m;
  patch.resolution_azimuth_m = res.azimuth_m;
  patch.samples.resize(patch.rows() * patch.cols());

  for (std::size_t row = 0; row < patch.rows(); ++row) {
    const double d_az = (static_cast<double>(row) - static_cast<double>(half_az)) * grid.spacing_azimuth_m;
    for (std::size_t col = 0; col < patch.cols(); ++col) {
      const double d_rg = (static_cast<double>(col) - static_cast<double>(half_rg)) * grid.spacing_range_m;
      patch.samples[row * patch.cols() + col] = rotated_sinc(d_rg, d_az, angle_rad, res);
    }
  }
  patch.samples[half_az * patch.cols() + half_rg] = 1.0;
  return patch;
}

PsfPatch synthesize_psf(const ImagingGeometry& geometry, double target_azimuth_m,
                        double target_range_m, const PsfTruncation& truncation) {
  if (!std::isfinite(target_azimuth_m) || !std::isfinite(target_range_m)) {
    throw std::domain_error("non-finite target position");
  }
  GridSpec::Cell cell;
  if (!geometry.grid.nearest_cell(target_azimuth_m, target_range_m, cell)) {
    throw std::domain_error("target lies outside the imaging grid");
  }
  return synthesize_psf_at(geometry, slant_range(geometry, target_azimuth_m, target_range_m),
                           observation_angle(geometry, target_azimuth_m, target_range_m), truncation);
}

PsfBank::Key PsfBank::key_for(double slant_range_m, double angle_rad) const {
  auto bin = [](double value, double reference, double step) -> std::int64_t {
    if (std::isinf(step)) return 0;
    return static_cast<std::int64_t>(std::llround((value - reference) / step));
  };
  return {bin(slant_range_m, reference_range_m_, quantization_.range_step_m),
          bin(angle_rad, reference_angle_rad_, quantization_.angle_step_rad)};
}

std::pair<double, double> PsfBank::bin_center(const Key& key) const {
  auto center = [](std::int64_t k, double reference, double step) {
    return k == 0 ? reference : reference + static_cast<double>(k) * step;
  };
  // Clamping toward the grid's own span keeps the center within half a step of
  // every member while staying physical (R > 0, |theta| < pi/2).
  const double r = std::clamp(center(key.first, reference_range_m_, quantization_.range_step_m),
                              min_range_m_, max_range_m_);
  const double a = std::clamp(center(key.second, reference_angle_rad_, quantization_.angle_step_rad),
                              min_angle_rad_, max_angle_rad_);
  return {r, a};
}

PsfBank build_psf_bank(const ImagingGeometry& geometry, const PsfQuantization& quantization,
                       const PsfTruncation& truncation, Execution execution) {
  geometry.validate();
  auto valid_step = [](double s) { return s > 0.0 && !std::isnan(s); };
  if (!valid_step(quantization.range_step_m) || !valid_step(quantization.angle_step_rad)) {
    throw std::invalid_argument("PSF quantization steps must be > 0");
  }

  PsfBank bank;
  bank.geometry_ = geometry;
  bank.quantization_ = quantization;
  bank.truncation_ = truncation;

  const GridSpec& grid = geometry.grid;
  const std::size_t ca = grid.n_azimuth / 2;
  const std::size_t cr = grid.n_range / 2;
  bank.reference_range_m_ = slant_range(geometry, grid.azimuth_of(ca), grid.range_of(cr));
  bank.reference_angle_rad_ = observation_angle(geometry, grid.azimuth_of(ca), grid.range_of(cr));

  std::vector<PsfBank::Key> cell_keys(grid.cells());
  bank.min_range_m_ = bank.min_angle_rad_ = std::numeric_limits<double>::infinity();
  bank.max_range_m_ = bank.max_angle_rad_ = -std::numeric_limits<double>::infinity();
  for (std::size_t ia = 0; ia < grid.n_azimuth; ++ia) {
    for (std::size_t ir = 0; ir < grid.n_range; ++ir) {
      const double r = slant_range(geometry, grid.azimuth_of(ia), grid.range_of(ir));
      const double a = observation_angle(geometry, grid.azimuth_of(ia), grid.range_of(ir));
      bank.min_range_m_ = std::min(bank.min_range_m_, r);
      bank.max_range_m_ = std::max(bank.max_range_m_, r);
      bank.min_angle_rad_ = std::min(bank.min_angle_rad_, a);
      bank.max_angle_rad_ = std::max(bank.max_angle_rad_, a);
      cell_keys[grid.index(ia, ir)] = bank.key_for(r, a);
    }
  }

  std::map<PsfBank::Key, std::uint32_t> index_of;
  for (const auto& k : cell_keys) index_of.emplace(k, 0);
  std::uint32_t next = 0;
  for (auto& [k, idx] : index_of) {
    idx = next++;
    bank.keys_.push_back(k);
  }
  bank.cell_patch_.resize(grid.cells());
  for (std::size_t i = 0; i < cell_keys.size(); ++i) bank.cell_patch_[i] = index_of.at(cell_keys[i]);

  bank.patches_.resize(bank.keys_.size());
  const auto n = static_cast<std::int64_t>(bank.keys_.size());
  if (execution == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < n; ++i) {
      const auto [r, a] = bank.bin_center(bank.keys_[i]);
      bank.patches_[i] = synthesize_psf_at(geometry, r, a, truncation);
    }
  } else {
    for (std::int64_t i = 0; i < n; ++i) {
      const auto [r, a] = bank.bin_center(bank.keys_[i]);
      bank.patches_[i] = synthesize_psf_at(geometry, r, a, truncation);
    }
  }
  return bank;
}

double mainlobe_width_3db(std::span<const double> magnitudes, std::size_t peak, double spacing) {
  if (peak >= magnitudes.size()) throw std::out_of_range("peak index outside profile");
  const double level = magnitudes[peak] / std::sqrt(2.0);
  double left = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = peak; i-- > 0;) {
    if (magnitudes[i] < level) {
      left = static_cast<double>(i) + (level - magnitudes[i]) / (magnitudes[i + 1] - magnitudes[i]);
      break;
    }
  }
  double right = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = peak + 1; i < magnitudes.size(); ++i) {
    if (magnitudes[i] < level) {
      right = static_cast<double>(i - 1) +
              (magnitudes[i - 1] - level) / (magnitudes[i - 1] - magnitudes[i]);
      break;
    }
  }
  if (std::isnan(left) || std::isnan(right)) return std::numeric_limits<double>::infinity();
  return (right - left) * spacing;
}

PsfWidths measure_psf_widths(const Resolutions& res, double angle_rad) {
  const double c = std::cos(angle_rad);
  const double s = std::sin(angle_rad);
  auto width = [&](double dir_range, double dir_azimuth, double rho) {
    constexpr std::size_t half = 1024;
    const double step = 2.0 * rho / static_cast<double>(half);
    std::vector<double> mag(2 * half + 1);
    for (std::size_t i = 0; i < mag.size(); ++i) {
      const double t = (static_cast<double>(i) - static_cast<double>(half)) * step;
      mag[i] = std::abs(rotated_sinc(t * dir_range, t * dir_azimuth, angle_rad, res));
    }
    return mainlobe_width_3db(mag, half, step);
  };
  return {width(c, s, res.range_m), width(-s, c, res.azimuth_m)};
}

}  // namespace nfsar
