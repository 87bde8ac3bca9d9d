#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "estimate.hpp"
#include "iq_io.hpp"
#include "oracle.hpp"

namespace scd {

// SCD1 raster file: a 52-byte little-endian header followed by rows*cols
// row-major values (rows index alpha, cols index f).
//
//   offset size field
//        0    4 magic "SCD1"
//        4    4 u32 version = 1
//        8    4 u32 rows (alpha bins)
//       12    4 u32 cols (f bins)
//       16    8 f64 alpha_min
//       24    8 f64 alpha_max
//       32    8 f64 f_min
//       40    8 f64 f_max
//       48    4 u32 precision (0 = f32 payload, 1 = f64 payload)
struct ScdFileHeader {
  std::array<char, 4> magic{'S', 'C', 'D', '1'};
  std::uint32_t version = 1;
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  double alpha_min = -1.0;
  double alpha_max = 1.0;
  double f_min = -0.5;
  double f_max = 0.5;
  std::uint32_t precision = 0;

  static constexpr std::size_t kBytes = 52;

  bool same_layout(const ScdFileHeader& o) const {
    return rows == o.rows && cols == o.cols && alpha_min == o.alpha_min && alpha_max == o.alpha_max &&
           f_min == o.f_min && f_max == o.f_max;
  }
};

using AnyGrid = std::variant<Grid<float>, Grid<double>>;

namespace detail {

template <class U>
void put_le(std::string& out, U v) {
  if constexpr (sizeof(U) == 4) {
    const auto bits = to_le(std::bit_cast<std::uint32_t>(v));
    out.append(reinterpret_cast<const char*>(&bits), 4);
  } else {
    const auto bits = to_le(std::bit_cast<std::uint64_t>(v));
    out.append(reinterpret_cast<const char*>(&bits), 8);
  }
}

template <class U>
U get_le(const char* p) {
  if constexpr (sizeof(U) == 4) {
    std::uint32_t bits;
    std::memcpy(&bits, p, 4);
    return std::bit_cast<U>(to_le(bits));
  } else {
    std::uint64_t bits;
    std::memcpy(&bits, p, 8);
    return std::bit_cast<U>(to_le(bits));
  }
}

}  // namespace detail

template <std::floating_point T>
ScdFileHeader header_for(const Grid<T>& g) {
  ScdFileHeader h;
  h.rows = static_cast<std::uint32_t>(g.rows);
  h.cols = static_cast<std::uint32_t>(g.cols);
  h.alpha_min = g.alpha_min;
  h.alpha_max = g.alpha_max;
  h.f_min = g.f_min;
  h.f_max = g.f_max;
  h.precision = std::is_same_v<T, float> ? 0 : 1;
  return h;
}

template <std::floating_point T>
std::string encode_scd1(const Grid<T>& g) {
  if (g.values.size() != g.rows * g.cols) throw DimensionError("SCD1: value count does not match rows*cols");
  const auto h = header_for(g);
  std::string out;
  out.reserve(ScdFileHeader::kBytes + g.values.size() * sizeof(T));
  out.append(h.magic.data(), 4);
  detail::put_le(out, h.version);
  detail::put_le(out, h.rows);
  detail::put_le(out, h.cols);
  detail::put_le(out, h.alpha_min);
  detail::put_le(out, h.alpha_max);
  detail::put_le(out, h.f_min);
  detail::put_le(out, h.f_max);
  detail::put_le(out, h.precision);
  for (const T v : g.values) detail::put_le(out, v);
  return out;
}

inline AnyGrid decode_scd1(const std::string& bytes) {
  if (bytes.size() < ScdFileHeader::kBytes || bytes.compare(0, 4, "SCD1") != 0) {
    throw IoError("not an SCD1 file");
  }
  const char* p = bytes.data();
  ScdFileHeader h;
  h.version = detail::get_le<std::uint32_t>(p + 4);
  h.rows = detail::get_le<std::uint32_t>(p + 8);
  h.cols = detail::get_le<std::uint32_t>(p + 12);
  h.alpha_min = detail::get_le<double>(p + 16);
  h.alpha_max = detail::get_le<double>(p + 24);
  h.f_min = detail::get_le<double>(p + 32);
  h.f_max = detail::get_le<double>(p + 40);
  h.precision = detail::get_le<std::uint32_t>(p + 48);
  if (h.version != 1) throw IoError("unsupported SCD1 version " + std::to_string(h.version));
  if (h.precision > 1) throw IoError("unknown SCD1 precision flag");
  const std::size_t count = std::size_t{h.rows} * h.cols;
  const std::size_t width = h.precision == 0 ? 4 : 8;
  if (bytes.size() != ScdFileHeader::kBytes + count * width) throw IoError("SCD1 payload size mismatch");

  auto fill = [&]<class T>(Grid<T> g) -> AnyGrid {
    g.rows = h.rows;
    g.cols = h.cols;
    g.alpha_min = h.alpha_min;
    g.alpha_max = h.alpha_max;
    g.f_min = h.f_min;
    g.f_max = h.f_max;
    g.values.resize(count);
    for (std::size_t i = 0; i < count; ++i) g.values[i] = detail::get_le<T>(p + ScdFileHeader::kBytes + i * width);
    return g;
  };
  return h.precision == 0 ? fill(Grid<float>{}) : fill(Grid<double>{});
}

inline std::string read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file_bytes(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("short write to " + path.string());
}

template <std::floating_point T>
void write_scd1(const std::filesystem::path& path, const Grid<T>& g) {
  write_file_bytes(path, encode_scd1(g));
}

inline void write_scd1(const std::filesystem::path& path, const AnyGrid& g) {
  std::visit([&](const auto& grid) { write_scd1(path, grid); }, g);
}

inline AnyGrid read_scd1(const std::filesystem::path& path) { return decode_scd1(read_file_bytes(path)); }

inline ScdFileHeader header_of(const AnyGrid& g) {
  return std::visit([](const auto& grid) { return header_for(grid); }, g);
}

inline std::vector<double> values_as_double(const AnyGrid& g) {
  return std::visit([](const auto& grid) { return std::vector<double>(grid.values.begin(), grid.values.end()); }, g);
}

// Binary PGM (P5), 8-bit. Row 0 of the image is the largest alpha. With
// log_scale the values are shown in dB over the 60 dB below the peak.
template <std::floating_point T>
void write_pgm(const std::filesystem::path& path, const Grid<T>& g, bool log_scale) {
  double peak = 0.0;
  for (const T v : g.values) peak = std::max(peak, static_cast<double>(v));
  std::string out = "P5\n" + std::to_string(g.cols) + " " + std::to_string(g.rows) + "\n255\n";
  out.reserve(out.size() + g.values.size());
  for (std::size_t r = 0; r < g.rows; ++r) {
    const std::size_t row = g.rows - 1 - r;
    for (std::size_t c = 0; c < g.cols; ++c) {
      const double v = static_cast<double>(g.at(row, c));
      double level = 0.0;
      if (peak > 0.0) {
        if (log_scale) {
          const double db = v > 0.0 ? 10.0 * std::log10(v / peak) : -60.0;
          level = std::clamp((db + 60.0) / 60.0, 0.0, 1.0);
        } else {
          level = v / peak;
        }
      }
      out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(level * 255.0))));
    }
  }
  write_file_bytes(path, out);
}

// CSV with header "alpha,value".
inline void write_profile_csv(const std::filesystem::path& path, const oracle::AlphaProfile& p) {
  std::ostringstream os;
  os << "alpha,value\n" << std::setprecision(17);
  for (std::size_t i = 0; i < p.alphas.size(); ++i) os << p.alphas[i] << "," << p.values[i] << "\n";
  write_file_bytes(path, os.str());
}

// 64-bit FNV-1a over the raw value bytes.
template <class T>
std::uint64_t content_hash(std::span<const T> values) {
  std::uint64_t h = 1469598103934665603ULL;
  const auto* bytes = reinterpret_cast<const unsigned char*>(values.data());
  for (std::size_t i = 0; i < values.size_bytes(); ++i) {
    h ^= bytes[i];
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace scd
