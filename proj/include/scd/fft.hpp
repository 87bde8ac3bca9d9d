#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "parallel.hpp"
#include "types.hpp"

namespace scd {

inline constexpr std::size_t kMaxFftSize = std::size_t{1} << 20;

// Forward, unscaled, power-of-two FFT plan: iterative radix-2
// decimation-in-time with a bit-reversal permutation.
//
// The twiddle table holds exp(-i*2*pi*j/size) for j < size/2, computed in
// double and rounded to T. Plans are immutable once built and may be shared
// between threads.
template <std::floating_point T>
class FftPlan {
 public:
  explicit FftPlan(std::size_t size) : size_(size) {
    if (!is_pow2(size) || size > kMaxFftSize) {
      throw DimensionError("FFT size must be a power of two in [1, 2^20], got " +
                           std::to_string(size));
    }
    log2_ = log2_exact(size);
    twiddles_.resize(size / 2);
    for (std::size_t j = 0; j < size / 2; ++j) {
      const auto w = unit_root(j, size);
      twiddles_[j] = {static_cast<T>(w.real()), static_cast<T>(w.imag())};
    }
    bitrev_.resize(size);
    for (std::size_t i = 0; i < size; ++i) {
      std::size_t r = 0;
      for (unsigned b = 0; b < log2_; ++b) r |= ((i >> b) & 1U) << (log2_ - 1 - b);
      bitrev_[i] = static_cast<std::uint32_t>(r);
    }
  }

  std::size_t size() const { return size_; }
  std::span<const std::complex<T>> twiddles() const { return twiddles_; }

  // In-place transform of exactly size() values.
  void execute(std::span<std::complex<T>> data) const {
    if (data.size() != size_) {
      throw DimensionError("FFT input length " + std::to_string(data.size()) +
                           " does not match plan size " + std::to_string(size_));
    }
    for (std::size_t i = 0; i < size_; ++i) {
      const std::size_t j = bitrev_[i];
      if (i < j) std::swap(data[i], data[j]);
    }
    for (std::size_t len = 2; len <= size_; len <<= 1) {
      const std::size_t half = len / 2;
      const std::size_t stride = size_ / len;
      for (std::size_t base = 0; base < size_; base += len) {
        for (std::size_t j = 0; j < half; ++j) {
          const auto u = data[base + j];
          const auto v = cmul(data[base + j + half], twiddles_[j * stride]);
          data[base + j] = u + v;
          data[base + j + half] = u - v;
        }
      }
    }
  }

 private:
  std::size_t size_;
  unsigned log2_ = 0;
  std::vector<std::complex<T>> twiddles_;
  std::vector<std::uint32_t> bitrev_;
};

template <std::floating_point T>
ComplexSeries<T> fft(const FftPlan<T>& plan, std::span<const std::complex<T>> x) {
  if (x.size() != plan.size()) {
    throw DimensionError("fft: input length " + std::to_string(x.size()) +
                         " does not match plan size " + std::to_string(plan.size()));
  }
  ComplexSeries<T> out(x.begin(), x.end());
  plan.execute(out);
  return out;
}

// Swaps the two halves so that bin 0 lands in the middle.
template <class V>
std::vector<V> fft_shift(std::span<const V> x) {
  if (x.size() % 2 != 0) {
    throw DimensionError("fft_shift requires an even length, got " + std::to_string(x.size()));
  }
  const std::size_t half = x.size() / 2;
  std::vector<V> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[(i + half) % x.size()];
  return out;
}

template <class V>
std::vector<V> fft_shift(const std::vector<V>& x) {
  return fft_shift(std::span<const V>(x));
}

template <std::floating_point T>
ComplexMatrix<T> transpose(const ComplexMatrix<T>& m) {
  ComplexMatrix<T> out(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = m(i, j);
  }
  return out;
}

// Length M1*M2 DFT computed as two passes of shorter FFTs.
//
// The input is viewed as an M1 x M2 matrix with n = m1*M2 + m2. Stage 1 runs
// an M1-point FFT down every column m2 and multiplies element (m1', m2) by the
// rotation factor exp(-i*2*pi*m2*m1'/N). Stage 2 runs an M2-point FFT along
// every row m1'. Output bin m1' + M1*m2' is written to index M1*m2' + m1',
// so the result is in natural DFT order.
template <std::floating_point T>
ComplexSeries<T> fft_decomposed(std::span<const std::complex<T>> x, std::size_t m1,
                                std::size_t m2, unsigned threads = 1) {
  if (!is_pow2(m1) || !is_pow2(m2) || m1 > 1024 || m2 > 1024) {
    throw DimensionError("fft_decomposed: M1 and M2 must be powers of two no larger than 1024");
  }
  const std::size_t n = m1 * m2;
  if (x.size() != n) {
    throw DimensionError("fft_decomposed: input length " + std::to_string(x.size()) +
                         " is not M1*M2 = " + std::to_string(n));
  }
  const FftPlan<T> plan1(m1);
  const FftPlan<T> plan2(m2);
  const auto roots = unit_roots<T>(n);

  // rotated[m1'][m2]
  ComplexSeries<T> rotated(n);
  parallel_for(m2, threads, [&](std::size_t begin, std::size_t end) {
    ComplexSeries<T> column(m1);
    for (std::size_t c = begin; c < end; ++c) {
      for (std::size_t r = 0; r < m1; ++r) column[r] = x[r * m2 + c];
      plan1.execute(column);
      for (std::size_t r = 0; r < m1; ++r) rotated[r * m2 + c] = cmul(column[r], roots[(c * r) % n]);
    }
  });

  ComplexSeries<T> out(n);
  parallel_for(m1, threads, [&](std::size_t begin, std::size_t end) {
    ComplexSeries<T> row(m2);
    for (std::size_t r = begin; r < end; ++r) {
      std::copy_n(rotated.begin() + static_cast<std::ptrdiff_t>(r * m2), m2, row.begin());
      plan2.execute(row);
      for (std::size_t c = 0; c < m2; ++c) out[m1 * c + r] = row[c];
    }
  });
  return out;
}

}  // namespace scd
