#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace nfsar {

using cplx = std::complex<double>;

/// Regular image grid. Rows run along azimuth, columns along range; all
/// coordinates are metres relative to the array center.
struct GridSpec {
  std::size_t n_azimuth = 1;
  std::size_t n_range = 1;
  double spacing_azimuth_m = 1.0;
  double spacing_range_m = 1.0;
  double origin_azimuth_m = 0.0;  // azimuth of cell [0, 0]
  double origin_range_m = 1.0;    // range of cell [0, 0]

  std::size_t cells() const { return n_azimuth * n_range; }
  std::size_t index(std::size_t ia, std::size_t ir) const { return ia * n_range + ir; }
  double azimuth_of(std::size_t ia) const {
    return origin_azimuth_m + static_cast<double>(ia) * spacing_azimuth_m;
  }
  double range_of(std::size_t ir) const {
    return origin_range_m + static_cast<double>(ir) * spacing_range_m;
  }

  struct Cell {
    std::size_t azimuth = 0;
    std::size_t range = 0;
  };
  /// Nearest grid node, or false when the point lies outside the grid's
  /// half-cell-padded extent.
  bool nearest_cell(double azimuth_m, double range_m, Cell& cell) const;

  void validate() const;
  bool operator==(const GridSpec&) const = default;
};

/// 2D complex image carrying its grid metadata.
class ComplexImage {
 public:
  ComplexImage() = default;
  explicit ComplexImage(const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }
  std::size_t n_azimuth() const { return grid_.n_azimuth; }
  std::size_t n_range() const { return grid_.n_range; }
  std::size_t size() const { return data_.size(); }

  cplx& operator()(std::size_t ia, std::size_t ir) { return data_[grid_.index(ia, ir)]; }
  const cplx& operator()(std::size_t ia, std::size_t ir) const { return data_[grid_.index(ia, ir)]; }
  cplx& operator[](std::size_t i) { return data_[i]; }
  const cplx& operator[](std::size_t i) const { return data_[i]; }

  std::vector<cplx>& data() { return data_; }
  const std::vector<cplx>& data() const { return data_; }

  bool all_finite() const;
  double norm2() const;  // squared L2 norm
  double max_abs() const;

  ComplexImage& operator+=(const ComplexImage& other);
  ComplexImage& operator-=(const ComplexImage& other);

 private:
  GridSpec grid_;
  std::vector<cplx> data_;
};

ComplexImage operator+(ComplexImage a, const ComplexImage& b);
ComplexImage operator-(ComplexImage a, const ComplexImage& b);

/// Hermitian inner product sum(conj(a) * b).
cplx inner(const ComplexImage& a, const ComplexImage& b);

/// Throws std::invalid_argument when the two grids differ.
void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what);

}  // namespace nfsar
