#pragma once

#include <bit>
#include <charconv>
#include <complex>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "types.hpp"

namespace scd {

namespace detail {

inline std::uint32_t to_le(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  return ((v & 0xFFU) << 24) | ((v & 0xFF00U) << 8) | ((v >> 8) & 0xFF00U) | (v >> 24);
}

inline std::uint64_t to_le(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  return (static_cast<std::uint64_t>(to_le(static_cast<std::uint32_t>(v))) << 32) |
         to_le(static_cast<std::uint32_t>(v >> 32));
}

inline void put_f32(std::string& out, float v) {
  const auto bits = to_le(std::bit_cast<std::uint32_t>(v));
  char buf[4];
  std::memcpy(buf, &bits, 4);
  out.append(buf, 4);
}

inline float get_f32(const char* p) {
  std::uint32_t bits;
  std::memcpy(&bits, p, 4);
  return std::bit_cast<float>(to_le(bits));
}

}  // namespace detail

// Interleaved little-endian float32 (I, Q) pairs, no header.
template <std::floating_point T>
void write_iq(const std::filesystem::path& path, std::span<const std::complex<T>> x) {
  std::string bytes;
  bytes.reserve(x.size() * 8);
  for (const auto& v : x) {
    detail::put_f32(bytes, static_cast<float>(v.real()));
    detail::put_f32(bytes, static_cast<float>(v.imag()));
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("short write to " + path.string());
}

inline ComplexSeries<double> read_iq(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() % 8 != 0) {
    throw IoError(path.string() + ": size is not a multiple of 8 bytes");
  }
  ComplexSeries<double> x(bytes.size() / 8);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const float re = detail::get_f32(bytes.data() + 8 * i);
    const float im = detail::get_f32(bytes.data() + 8 * i + 4);
    x[i] = {re, im};
  }
  if (!all_finite<double>(x)) throw IoError(path.string() + ": non-finite sample");
  return x;
}

// Two numeric columns (I, Q) separated by a comma, semicolon or whitespace.
// A leading non-numeric header line is skipped.
inline ComplexSeries<double> read_iq_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  ComplexSeries<double> x;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    for (auto& c : line) {
      if (c == ',' || c == ';' || c == '\t' || c == '\r') c = ' ';
    }
    std::istringstream fields(line);
    std::string a, b;
    if (!(fields >> a)) continue;
    if (!(fields >> b)) throw IoError(path.string() + ":" + std::to_string(line_no) + ": expected two columns");
    double re = 0.0, im = 0.0;
    const auto ra = std::from_chars(a.data(), a.data() + a.size(), re);
    const auto rb = std::from_chars(b.data(), b.data() + b.size(), im);
    const bool ok = ra.ec == std::errc{} && rb.ec == std::errc{} &&
                    ra.ptr == a.data() + a.size() && rb.ptr == b.data() + b.size();
    if (!ok) {
      if (x.empty() && line_no == 1) continue;
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": not a number");
    }
    x.emplace_back(re, im);
  }
  if (!all_finite<double>(x)) throw IoError(path.string() + ": non-finite sample");
  return x;
}

}  // namespace scd
