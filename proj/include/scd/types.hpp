#pragma once

#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"

namespace scd {

template <std::floating_point T>
using ComplexSeries = std::vector<std::complex<T>>;

template <std::floating_point T>
using RealSeries = std::vector<T>;

// Working precision of a pipeline run. The oracles always use f64.
enum class Precision { f32, f64 };

inline const char* to_string(Precision p) { return p == Precision::f32 ? "f32" : "f64"; }

// Dense row-major complex matrix.
template <std::floating_point T>
class ComplexMatrix {
 public:
  using value_type = std::complex<T>;

  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  value_type& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const value_type& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<value_type> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const value_type> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<value_type> data() { return data_; }
  std::span<const value_type> data() const { return data_; }

  bool operator==(const ComplexMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<value_type> data_;
};

template <std::floating_point T>
bool all_finite(std::span<const std::complex<T>> x) {
  for (const auto& v : x) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

constexpr bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

constexpr unsigned log2_exact(std::size_t n) {
  unsigned k = 0;
  while ((std::size_t{1} << k) < n) ++k;
  return k;
}

// Multiplication without the NaN/Inf recovery path of operator* for std::complex.
template <std::floating_point T>
inline std::complex<T> cmul(std::complex<T> a, std::complex<T> b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

template <std::floating_point T>
inline std::complex<T> cmul_conj(std::complex<T> a, std::complex<T> b) {
  return {a.real() * b.real() + a.imag() * b.imag(), a.imag() * b.real() - a.real() * b.imag()};
}

template <std::floating_point T>
inline T norm2(std::complex<T> a) {
  return a.real() * a.real() + a.imag() * a.imag();
}

// exp(-i*2*pi*num/den) evaluated in double with the index reduced exactly first.
inline std::complex<double> unit_root(std::size_t num, std::size_t den) {
  const std::size_t r = num % den;
  const double phase = -2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(den);
  return {std::cos(phase), std::sin(phase)};
}

// Table of exp(-i*2*pi*j/n) for j in [0, n), generated in double and rounded to T.
template <std::floating_point T>
std::vector<std::complex<T>> unit_roots(std::size_t n) {
  std::vector<std::complex<T>> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto w = unit_root(j, n);
    out[j] = {static_cast<T>(w.real()), static_cast<T>(w.imag())};
  }
  return out;
}

template <std::floating_point To, std::floating_point From>
ComplexSeries<To> convert(std::span<const std::complex<From>> x) {
  ComplexSeries<To> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = {static_cast<To>(x[i].real()), static_cast<To>(x[i].imag())};
  }
  return out;
}

}  // namespace scd
