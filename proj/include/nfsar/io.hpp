#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nfsar/image.hpp"
#include "nfsar/simulate.hpp"

namespace nfsar::io {

/// Malformed input file. `line` is 1-based, 0 when not applicable.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// NFSAR1: "NFSAR1\n", then little-endian u32 n_azimuth, u32 n_range,
// f64 spacing_azimuth_m, f64 spacing_range_m, f64 origin_azimuth_m,
// f64 origin_range_m, then row-major (real, imag) f64 pairs.
inline constexpr std::string_view image_magic = "NFSAR1\n";

std::string encode_image(const ComplexImage& image);
ComplexImage decode_image(std::string_view bytes);
void write_image(const std::filesystem::path& path, const ComplexImage& image);
ComplexImage read_image(const std::filesystem::path& path);

/// 16-bit binary PGM (P5, big-endian samples) of 20 log10 |x| mapped from
/// [peak - range_db, peak] onto [0, 65535]. Width is n_range, height n_azimuth.
std::string encode_pgm_db(const ComplexImage& image, double range_db = 40.0);
std::string encode_pgm_db(const std::vector<double>& magnitudes, std::size_t width, std::size_t height,
                          double range_db = 40.0);

// Scene text format:
//   nfsar-scene 1
//   label <free text>            (optional)
//   <azimuth_m> <range_m> <amplitude_dbsm> <phase_deg>
// Fields may be separated by whitespace or commas; '#' starts a comment.
SceneSpec parse_scene(std::istream& in);
SceneSpec read_scene(const std::filesystem::path& path);
std::string format_scene(const SceneSpec& scene);

/// Writes through a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);
std::string read_file(const std::filesystem::path& path);

/// "%#.6g"
std::string csv_number(double v);

}  // namespace nfsar::io
