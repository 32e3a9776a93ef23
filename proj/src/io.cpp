#include "nfsar/io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "nfsar/geometry.hpp"

namespace nfsar::io {

namespace {

template <class T>
void put_le(std::string& out, T value) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  const U bits = std::bit_cast<U>(value);
  for (std::size_t i = 0; i < sizeof(U); ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
}

template <class T>
T get_le(std::string_view bytes, std::size_t& pos) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  if (pos + sizeof(U) > bytes.size()) throw FormatError("NFSAR1: truncated file");
  U bits = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    bits |= static_cast<U>(static_cast<unsigned char>(bytes[pos + i])) << (8 * i);
  }
  pos += sizeof(U);
  return std::bit_cast<T>(bits);
}

constexpr std::size_t header_size = 7 + 4 + 4 + 4 * 8;

}  // namespace

std::string encode_image(const ComplexImage& image) {
  const GridSpec& g = image.grid();
  if (g.n_azimuth > UINT32_MAX || g.n_range > UINT32_MAX) throw std::invalid_argument("image too large for NFSAR1");
  std::string out;
  out.reserve(header_size + image.size() * 16);
  out.append(image_magic);
  put_le(out, static_cast<std::uint32_t>(g.n_azimuth));
  put_le(out, static_cast<std::uint32_t>(g.n_range));
  put_le(out, g.spacing_azimuth_m);
  put_le(out, g.spacing_range_m);
  put_le(out, g.origin_azimuth_m);
  put_le(out, g.origin_range_m);
  for (const auto& v : image.data()) {
    put_le(out, v.real());
    put_le(out, v.imag());
  }
  return out;
}

ComplexImage decode_image(std::string_view bytes) {
  if (bytes.substr(0, image_magic.size()) != image_magic) throw FormatError("NFSAR1: bad magic");
  std::size_t pos = image_magic.size();
  GridSpec g;
  g.n_azimuth = get_le<std::uint32_t>(bytes, pos);
  g.n_range = get_le<std::uint32_t>(bytes, pos);
  g.spacing_azimuth_m = get_le<double>(bytes, pos);
  g.spacing_range_m = get_le<double>(bytes, pos);
  g.origin_azimuth_m = get_le<double>(bytes, pos);
  g.origin_range_m = get_le<double>(bytes, pos);
  try {
    g.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("NFSAR1: ") + e.what());
  }
  const std::size_t expected = header_size + g.cells() * 16;
  if (bytes.size() != expected) throw FormatError("NFSAR1: payload size does not match header");
  ComplexImage image(g);
  for (auto& v : image.data()) {
    const double re = get_le<double>(bytes, pos);
    const double im = get_le<double>(bytes, pos);
    v = {re, im};
  }
  return image;
}

void write_image(const std::filesystem::path& path, const ComplexImage& image) {
  write_file_atomic(path, encode_image(image));
}

ComplexImage read_image(const std::filesystem::path& path) { return decode_image(read_file(path)); }

std::string encode_pgm_db(const std::vector<double>& magnitudes, std::size_t width, std::size_t height,
                          double range_db) {
  if (magnitudes.size() != width * height) throw std::invalid_argument("PGM size mismatch");
  if (!(range_db > 0.0)) throw std::invalid_argument("PGM dynamic range must be > 0");
  double peak = 0.0;
  for (double m : magnitudes) peak = std::max(peak, m);
  const double peak_db = 20.0 * std::log10(peak);
  std::string out = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n65535\n";
  out.reserve(out.size() + 2 * magnitudes.size());
  for (double m : magnitudes) {
    std::uint16_t pixel = 0;
    if (m > 0.0 && peak > 0.0) {
      const double db = 20.0 * std::log10(m);
      const double t = std::clamp((db - (peak_db - range_db)) / range_db, 0.0, 1.0);
      pixel = static_cast<std::uint16_t>(std::lround(65535.0 * t));
    }
    out.push_back(static_cast<char>(pixel >> 8));
    out.push_back(static_cast<char>(pixel & 0xFF));
  }
  return out;
}

std::string encode_pgm_db(const ComplexImage& image, double range_db) {
  std::vector<double> mag(image.size());
  for (std::size_t i = 0; i < image.size(); ++i) mag[i] = std::abs(image[i]);
  return encode_pgm_db(mag, image.n_range(), image.n_azimuth(), range_db);
}

SceneSpec parse_scene(std::istream& in) {
  SceneSpec scene;
  std::string raw;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw.substr(0, raw.find('#'));
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (!header_seen) {
      std::string version;
      if (first != "nfsar-scene" || !(ls >> version) || version != "1") {
        throw FormatError("expected header 'nfsar-scene 1'", line_no);
      }
      std::string extra;
      if (ls >> extra) throw FormatError("unexpected text after header", line_no);
      header_seen = true;
      continue;
    }
    if (first == "label") {
      std::string rest;
      std::getline(ls >> std::ws, rest);
      while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest.back()))) rest.pop_back();
      scene.label = rest;
      continue;
    }
    double values[4];
    std::istringstream rs(line);
    for (double& v : values) {
      std::string tok;
      if (!(rs >> tok)) throw FormatError("expected 4 fields: azimuth_m range_m amplitude_dbsm phase_deg", line_no);
      std::size_t used = 0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size() || !std::isfinite(v)) throw FormatError("invalid number '" + tok + "'", line_no);
    }
    std::string extra;
    if (rs >> extra) throw FormatError("too many fields", line_no);
    if (!(values[1] > 0.0)) throw FormatError("range_m must be > 0", line_no);
    scene.scatterers.push_back({values[0], values[1], values[2], values[3] * pi / 180.0});
  }
  if (!header_seen) throw FormatError("missing header 'nfsar-scene 1'", line_no ? line_no : 1);
  return scene;
}

SceneSpec read_scene(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scene file " + path.string());
  return parse_scene(in);
}

std::string format_scene(const SceneSpec& scene) {
  std::ostringstream os;
  os << "nfsar-scene 1\n";
  if (!scene.label.empty()) os << "label " << scene.label << "\n";
  os << "# azimuth_m range_m amplitude_dbsm phase_deg\n";
  char buf[160];
  for (const auto& s : scene.scatterers) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g\n", s.azimuth_m, s.range_m, s.amplitude_dbsm,
                  s.phase_rad * 180.0 / pi);
    os << buf;
  }
  return os.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string csv_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%#.6g", v);
  return buf;
}

}  // namespace nfsar::io
