#include "nfsar/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nfsar {

bool GridSpec::nearest_cell(double azimuth_m, double range_m, Cell& cell) const {
  const double fa = (azimuth_m - origin_azimuth_m) / spacing_azimuth_m;
  const double fr = (range_m - origin_range_m) / spacing_range_m;
  if (!std::isfinite(fa) || !std::isfinite(fr)) return false;
  const double ra = std::round(fa);
  const double rr = std::round(fr);
  if (ra < 0.0 || rr < 0.0 || ra > static_cast<double>(n_azimuth - 1) ||
      rr > static_cast<double>(n_range - 1)) {
    return false;
  }
  cell.azimuth = static_cast<std::size_t>(ra);
  cell.range = static_cast<std::size_t>(rr);
  return true;
}

void GridSpec::validate() const {
  if (n_azimuth < 1 || n_range < 1) throw std::invalid_argument("grid dimensions must be >= 1");
  if (!(spacing_azimuth_m > 0.0) || !(spacing_range_m > 0.0) || !std::isfinite(spacing_azimuth_m) ||
      !std::isfinite(spacing_range_m)) {
    throw std::invalid_argument("grid spacings must be positive and finite");
  }
  if (!std::isfinite(origin_azimuth_m) || !std::isfinite(origin_range_m)) {
    throw std::invalid_argument("grid origin must be finite");
  }
}

ComplexImage::ComplexImage(const GridSpec& grid) : grid_(grid), data_(grid.cells()) {}

bool ComplexImage::all_finite() const {
  for (const auto& v : data_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

double ComplexImage::norm2() const {
  double s = 0.0;
  for (const auto& v : data_) s += std::norm(v);
  return s;
}

double ComplexImage::max_abs() const {
  double m = 0.0;
  for (const auto& v : data_) m = std::max(m, std::abs(v));
  return m;
}

ComplexImage& ComplexImage::operator+=(const ComplexImage& other) {
  require_same_grid(grid_, other.grid_, "image addition");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexImage& ComplexImage::operator-=(const ComplexImage& other) {
  require_same_grid(grid_, other.grid_, "image subtraction");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexImage operator+(ComplexImage a, const ComplexImage& b) { return a += b; }
ComplexImage operator-(ComplexImage a, const ComplexImage& b) { return a -= b; }

cplx inner(const ComplexImage& a, const ComplexImage& b) {
  require_same_grid(a.grid(), b.grid(), "inner product");
  cplx s{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
  if (!(a == b)) throw std::invalid_argument(std::string("grid mismatch in ") + what);
}

}  // namespace nfsar
